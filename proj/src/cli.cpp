#include "surfbound/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <json.hpp>
#include <ostream>

#include "surfbound/actions.hpp"
#include "surfbound/bounds.hpp"
#include "surfbound/classify.hpp"
#include "surfbound/errors.hpp"
#include "surfbound/group_spec.hpp"
#include "surfbound/signature.hpp"

#ifndef SURFBOUND_DEFAULT_DATA_DIR
#define SURFBOUND_DEFAULT_DATA_DIR "data"
#endif

namespace surfbound {

namespace {

using nlohmann::json;

struct CliConfig {
  bool json_output = false;
  int group_cap = kDefaultOrderCap;
  std::size_t max_periods = 6;
  std::string data_dir = SURFBOUND_DEFAULT_DATA_DIR;
};

long env_long(const char* name, long fallback) {
  const char* v = std::getenv(name);
  if (!v) return fallback;
  try {
    return std::stol(v);
  } catch (const std::exception&) {
    return fallback;
  }
}

std::string env_string(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : fallback;
}

struct ContextOptions {
  bool odd = false;
  long min_prime = 0;
  std::string pq;
  bool not_div_8 = false;
  long p_group = 0;

  ClassContext to_context() const {
    ClassContext ctx;
    if (odd) ctx.min_prime = 3;
    if (min_prime > 0) ctx.min_prime = std::max(ctx.min_prime, min_prime);
    if (!pq.empty()) {
      auto comma = pq.find(',');
      if (comma == std::string::npos) fail(errc::bad_input, "--pq wants 'p,q' (e.g. 2,7 or 2,?)");
      std::string ps = pq.substr(0, comma), qs = pq.substr(comma + 1);
      if (ps != "?" && !ps.empty()) ctx.pq_p = std::stol(ps);
      if (qs != "?" && !qs.empty()) ctx.pq_q = std::stol(qs);
    }
    if (not_div_8) ctx.not_divisible_by_8 = true;
    if (p_group > 0) ctx.p_group_prime = p_group;
    return ctx;
  }
};

void add_context_options(CLI::App* cmd, ContextOptions& opts) {
  cmd->add_flag("--odd", opts.odd, "restrict to odd group order");
  cmd->add_option("--min-prime", opts.min_prime,
                  "no prime divisor of |G| below this prime");
  cmd->add_option("--pq", opts.pq, "|G| = p^m q^n; 'p,q' with '?' for an unknown prime");
  cmd->add_flag("--not-div-8", opts.not_div_8, "8 does not divide |G|");
  cmd->add_option("--p-group", opts.p_group, "G is a p-group for this prime");
}

GroupClass resolve_class(const std::string& name, ContextOptions& opts) {
  std::string key;
  for (char c : name) key += c == '-' ? '_' : c;
  if (key == "p_group") {
    if (opts.p_group <= 0)
      fail(errc::bad_input, "--class p-group needs --p-group <prime>");
    return GroupClass::general;
  }
  return parse_group_class(name);
}

json signature_json(const Signature& sig) {
  json j;
  j["signature"] = sig.to_string();
  j["measure"] = to_string(sig.measure());
  j["order_coefficient"] = to_string(Rational(2) / sig.measure());
  return j;
}

void emit(const CliConfig& cfg, std::ostream& out, const json& doc, const std::string& text) {
  if (cfg.json_output)
    out << doc.dump(2) << "\n";
  else
    out << text;
}

// ---- subcommand bodies -----------------------------------------------------

int cmd_bound(const CliConfig& cfg, std::ostream& out, const std::string& cls_name,
              ContextOptions& ctxopts, long genus) {
  BoundsRegistry reg = BoundsRegistry::load(cfg.data_dir + "/registry.txt");
  GroupClass cls = resolve_class(cls_name, ctxopts);
  ClassContext ctx = ctxopts.to_context();
  BoundResult res = reg.bound(cls, ctx, Integer(genus));

  json j;
  j["class"] = cls_name;
  j["context"] = ctx.to_string();
  j["genus"] = std::to_string(genus);
  j["bound"] = to_string(res.value);
  j["bounds"] = res.bounds_exponent ? "exp(G)" : "|G|";
  j["rules"] = res.rule_ids;
  j["anchors"] = res.anchors;
  j["via_exception"] = res.via_exception;
  j["excluded_rules"] = res.excluded_rules;

  std::ostringstream text;
  text << (res.bounds_exponent ? "exp(G) <= " : "|G| <= ") << to_string(res.value) << "\n";
  text << "class: " << cls_name << "   context: " << ctx.to_string() << "   genus: " << genus
       << "\n";
  for (std::size_t i = 0; i < res.rule_ids.size(); ++i)
    text << "rule " << res.rule_ids[i] << ": " << res.anchors[i] << "\n";
  if (res.via_exception) text << "note: value is a known exceptional value at this genus\n";
  for (const auto& ex : res.excluded_rules)
    text << "note: rule " << ex
         << " is excluded at this genus (exceptional value not known); the bound above is "
            "still valid\n";
  emit(cfg, out, j, text.str());
  return 0;
}

int cmd_attainable(const CliConfig& cfg, std::ostream& out, const std::string& cls_name,
                   ContextOptions& ctxopts, long genus) {
  BoundsRegistry reg = BoundsRegistry::load(cfg.data_dir + "/registry.txt");
  GroupClass cls = resolve_class(cls_name, ctxopts);
  ClassContext ctx = ctxopts.to_context();
  BoundResult b = reg.bound(cls, ctx, Integer(genus));
  AttainResult res = reg.attainable(cls, ctx, Integer(genus));

  json j;
  j["class"] = cls_name;
  j["context"] = ctx.to_string();
  j["genus"] = std::to_string(genus);
  j["bound"] = to_string(b.value);
  j["attainable"] = attain_name(res.verdict);
  j["condition"] = res.condition;
  j["rules"] = res.rule_ids;

  std::ostringstream text;
  text << "attainable: " << attain_name(res.verdict) << "   (bound " << to_string(b.value)
       << " at genus " << genus << ")\n";
  text << "condition: " << res.condition << "\n";
  emit(cfg, out, j, text.str());
  return 0;
}

int cmd_witness(const CliConfig& cfg, std::ostream& out, const std::string& cls_name,
                ContextOptions& ctxopts, long genus) {
  BoundsRegistry reg = BoundsRegistry::load(cfg.data_dir + "/registry.txt");
  GroupClass cls = resolve_class(cls_name, ctxopts);
  ClassContext ctx = ctxopts.to_context();
  auto res = reg.witness(cls, ctx, Integer(genus));
  if (!res) {
    emit(cfg, out, json{{"witness", nullptr}},
         "none: the bound is attainable here, but no constructive recipe is available\n");
    return 2;
  }
  json j;
  j["group"] = res->group_spec;
  j["signature"] = res->signature.to_string();
  j["order"] = res->order.get_str();
  j["verified"] = res->verified;
  j["rule"] = res->rule_id;

  std::ostringstream text;
  text << "group: " << res->group_spec << "\n";
  text << "signature: " << res->signature.to_string() << "\n";
  text << "order: " << res->order.get_str() << "\n";
  text << (res->verified ? "verified: generating vector found\n"
                         : "verified: no (beyond construction caps)\n");
  emit(cfg, out, j, text.str());
  return 0;
}

int cmd_enumerate(const CliConfig& cfg, std::ostream& out, const std::string& measure,
                  bool odd_periods, long orbit_genus_max, long min_period,
                  const std::string& periods) {
  SignatureFilter filter;
  filter.all_periods_odd = odd_periods;
  if (orbit_genus_max >= 0) filter.orbit_genus_max = static_cast<unsigned>(orbit_genus_max);
  if (min_period > 0) filter.min_period = min_period;
  if (!periods.empty()) {
    std::vector<Integer> allowed;
    std::istringstream ps(periods);
    std::string tok;
    while (std::getline(ps, tok, ',')) allowed.emplace_back(tok);
    filter.allowed_periods = allowed;
  }
  auto sigs = enumerate_signatures(parse_rational(measure), filter);

  json rows = json::array();
  std::ostringstream text;
  for (const auto& s : sigs) {
    rows.push_back(signature_json(s));
    text << s.to_string() << "  measure " << to_string(s.measure()) << "  |G| = "
         << to_string(Rational(2) / s.measure()) << "(g-1)\n";
  }
  text << sigs.size() << " signatures\n";
  json j;
  j["count"] = sigs.size();
  j["signatures"] = rows;
  emit(cfg, out, j, text.str());
  return 0;
}

int cmd_abelianize(const CliConfig& cfg, std::ostream& out, const std::string& sig_text) {
  Signature sig = Signature::parse(sig_text);
  FiniteAbelianGroup ab = abelianization(sig);
  auto images = abelianized_generator_images(sig);

  json j;
  j["signature"] = sig.to_string();
  j["abelianization"] = ab.to_string();
  j["free_rank"] = ab.free_rank();
  j["torsion_order"] = ab.torsion_order().get_str();
  json imgs = json::array();
  for (const auto& img : images) {
    json coords = json::array();
    for (const auto& c : img) coords.push_back(c.get_str());
    imgs.push_back(coords);
  }
  j["generator_images"] = imgs;

  std::ostringstream text;
  text << sig.to_string() << " has largest abelian quotient " << ab.to_string() << "\n";
  emit(cfg, out, j, text.str());
  return 0;
}

int cmd_derived_chain(const CliConfig& cfg, std::ostream& out, const std::string& sig_text,
                      long depth) {
  Signature sig = Signature::parse(sig_text);
  DerivedChain chain = derived_chain(sig, static_cast<unsigned>(depth));

  json steps = json::array();
  std::ostringstream text;
  text << "start: " << sig.to_string() << "\n";
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    const auto& [sub, quot] = chain.steps[i];
    json st;
    st["depth"] = i + 1;
    st["signature"] = sub.to_string();
    st["quotient"] = quot.to_string();
    steps.push_back(st);
    text << "derived " << i + 1 << ": " << sub.to_string() << "   quotient " << quot.to_string()
         << "\n";
  }
  text << "status: " << chain_status_name(chain.status) << "\n";
  json j;
  j["start"] = sig.to_string();
  j["steps"] = steps;
  j["status"] = chain_status_name(chain.status);
  emit(cfg, out, j, text.str());
  return 0;
}

int cmd_classify(const CliConfig& cfg, std::ostream& out, const std::string& spec) {
  ConstructionCaps caps{cfg.group_cap};
  FiniteGroup g = group_from_spec_or_file(spec, caps);
  ClassProfile p = classify(g, cfg.group_cap);

  json j;
  j["group"] = g.provenance();
  j["order"] = p.order;
  j["exponent"] = p.exponent;
  j["smallest_prime"] = p.smallest_prime;
  j["derived_series_orders"] = p.derived_series_orders;
  j["abelian"] = p.abelian;
  j["cyclic"] = p.cyclic;
  j["nilpotent"] = p.nilpotent;
  j["solvable"] = p.solvable;
  j["supersolvable"] = p.supersolvable;
  j["metabelian"] = p.metabelian;
  j["metacyclic"] = p.metacyclic;
  j["z_group"] = p.z_group;
  j["clt"] = tri_name(p.clt);
  j["square_free_order"] = p.square_free_order;
  j["odd_order"] = p.odd_order;
  j["odd_elements_form_subgroup"] = p.odd_elements_form_subgroup;
  j["nilpotent_commutator"] = p.nilpotent_commutator;
  j["missing_divisors"] = p.missing_divisors;
  if (p.pq_signature)
    j["pq_signature"] = {p.pq_signature->first, p.pq_signature->second};
  else
    j["pq_signature"] = nullptr;
  if (p.zappa) {
    j["zappa_indices"] = p.zappa->indices;
    std::vector<long> orders;
    for (const auto& s : p.zappa->chain) orders.push_back(s.order());
    j["zappa_chain_orders"] = orders;
  } else {
    j["zappa_indices"] = nullptr;
  }
  if (p.metacyclic_normal) {
    j["metacyclic_normal_order"] = p.metacyclic_normal->order();
  }
  if (p.odd_subgroup) j["odd_subgroup_order"] = p.odd_subgroup->order();

  std::ostringstream text;
  text << g.provenance() << ": order " << p.order << ", exponent " << p.exponent << "\n";
  auto flag = [&](const char* name, bool v) { text << "  " << name << ": " << (v ? "yes" : "no") << "\n"; };
  flag("abelian", p.abelian);
  flag("cyclic", p.cyclic);
  flag("nilpotent", p.nilpotent);
  flag("supersolvable", p.supersolvable);
  flag("solvable", p.solvable);
  flag("metabelian", p.metabelian);
  flag("metacyclic", p.metacyclic);
  flag("z_group", p.z_group);
  text << "  clt: " << tri_name(p.clt);
  if (p.clt == Tri::no) {
    text << "  (missing divisors:";
    for (long d : p.missing_divisors) text << " " << d;
    text << ")";
  }
  text << "\n";
  flag("square_free_order", p.square_free_order);
  flag("odd_order", p.odd_order);
  flag("odd_elements_form_subgroup", p.odd_elements_form_subgroup);
  flag("nilpotent_commutator", p.nilpotent_commutator);
  text << "  derived series orders:";
  for (long o : p.derived_series_orders) text << " " << o;
  text << "\n";
  if (p.zappa) {
    text << "  chain indices:";
    for (long i : p.zappa->indices) text << " " << i;
    text << "\n";
  }
  emit(cfg, out, j, text.str());
  return 0;
}

int cmd_action(const CliConfig& cfg, std::ostream& out, const std::string& spec,
               const std::string& sig_text) {
  ConstructionCaps caps{cfg.group_cap};
  FiniteGroup g = group_from_spec_or_file(spec, caps);
  Signature sig = Signature::parse(sig_text);
  SearchCaps scaps;
  scaps.max_periods = cfg.max_periods;
  scaps.group_order_cap = cfg.group_cap;
  auto vec = find_generating_vector(g, sig, scaps);

  if (!vec) {
    json j;
    j["group"] = g.provenance();
    j["signature"] = sig.to_string();
    j["found"] = false;
    emit(cfg, out, j, "none: no smooth action of " + g.provenance() + " with signature " +
                          sig.to_string() + "\n");
    return 2;
  }
  Integer genus = genus_of_action(g, sig);
  json j;
  j["group"] = g.provenance();
  j["signature"] = sig.to_string();
  j["found"] = true;
  j["genus"] = genus.get_str();
  j["vector"] = vec->labels();

  std::ostringstream text;
  text << "found: genus " << genus.get_str() << "\n";
  text << "vector:";
  for (const auto& l : vec->labels()) text << " " << l;
  text << "\n";
  emit(cfg, out, j, text.str());
  return 0;
}

int cmd_tables_verify(const CliConfig& cfg, std::ostream& out) {
  BoundsRegistry reg = BoundsRegistry::load(cfg.data_dir + "/registry.txt");
  TableReport report =
      reg.verify_tables(cfg.data_dir + "/table2.txt", cfg.data_dir + "/table3.txt");
  if (cfg.json_output) {
    json j;
    auto rows = [](const std::vector<TableRowCheck>& checks) {
      json arr = json::array();
      for (const auto& c : checks)
        arr.push_back({{"computed", c.computed}, {"expected", c.expected}, {"match", c.match}});
      return arr;
    };
    j["table2"] = rows(report.table2);
    j["table3"] = rows(report.table3);
    j["perfect_exclusions"] = report.perfect_exclusions;
    j["all_match"] = report.all_match;
    out << j.dump(2) << "\n";
  } else {
    out << report.to_string();
  }
  return report.all_match ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  cfg.group_cap = static_cast<int>(env_long("SURFBOUND_GROUP_CAP", kDefaultOrderCap));
  cfg.max_periods = static_cast<std::size_t>(env_long("SURFBOUND_MAX_PERIODS", 6));
  cfg.data_dir = env_string("SURFBOUND_DATA_DIR", SURFBOUND_DEFAULT_DATA_DIR);

  CLI::App app{"exact sharp bounds for automorphism groups of compact Riemann surfaces"};
  app.require_subcommand(1);
  app.add_flag("--json", cfg.json_output, "emit one machine-readable JSON document");

  std::string cls_name, pq, measure, sig_text, group_spec, periods;
  long genus = 0, depth = 1, orbit_genus_max = -1, min_period = 0;
  bool odd_periods = false;
  ContextOptions ctxopts;

  auto add_query_options = [&](CLI::App* cmd) {
    cmd->add_option("--class", cls_name, "group class")->required();
    cmd->add_option("--genus", genus, "genus, >= 2")->required();
    add_context_options(cmd, ctxopts);
  };

  CLI::App* bound_cmd = app.add_subcommand("bound", "sharp upper bound for a group class");
  add_query_options(bound_cmd);
  CLI::App* attain_cmd =
      app.add_subcommand("attainable", "is the bound attained at this genus?");
  add_query_options(attain_cmd);
  CLI::App* witness_cmd =
      app.add_subcommand("witness", "constructive witness group reaching the bound");
  add_query_options(witness_cmd);

  CLI::App* signatures = app.add_subcommand("signatures", "signature computations");
  signatures->require_subcommand(1);
  CLI::App* enum_cmd = signatures->add_subcommand("enumerate", "all signatures below a measure");
  enum_cmd->add_option("--max-measure", measure, "rational threshold, e.g. 1/9")->required();
  enum_cmd->add_flag("--odd-periods", odd_periods, "only odd periods");
  enum_cmd->add_option("--orbit-genus-max", orbit_genus_max, "cap on the orbit genus");
  enum_cmd->add_option("--min-period", min_period, "smallest allowed period");
  enum_cmd->add_option("--periods", periods, "comma-separated period whitelist");
  CLI::App* abel_cmd = signatures->add_subcommand("abelianize", "largest abelian quotient");
  abel_cmd->add_option("signature", sig_text, "(h;m1,...,mr)")->required();
  CLI::App* chain_cmd = signatures->add_subcommand("derived-chain", "iterated derived signatures");
  chain_cmd->add_option("signature", sig_text, "(h;m1,...,mr)")->required();
  chain_cmd->add_option("--depth", depth, "chain depth")->required();

  CLI::App* group = app.add_subcommand("group", "finite group computations");
  group->require_subcommand(1);
  CLI::App* classify_cmd = group->add_subcommand("classify", "compute the class profile");
  classify_cmd->add_option("group", group_spec, "group spec or table file")->required();
  CLI::App* action_cmd = group->add_subcommand("action", "search for a smooth action");
  action_cmd->add_option("--group", group_spec, "group spec or table file")->required();
  action_cmd->add_option("--signature", sig_text, "(0;m1,...,mr)")->required();

  CLI::App* tables = app.add_subcommand("tables", "signature table fixtures");
  tables->require_subcommand(1);
  CLI::App* verify_cmd = tables->add_subcommand("verify", "regenerate and diff both tables");
  (void)verify_cmd;

  std::vector<const char*> argv;
  argv.push_back("surfbound");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    int code = app.exit(e, msg, msg);
    (code == 0 ? out : err) << msg.str();
    return code == 0 ? 0 : 1;
  }

  try {
    if (bound_cmd->parsed()) return cmd_bound(cfg, out, cls_name, ctxopts, genus);
    if (attain_cmd->parsed()) return cmd_attainable(cfg, out, cls_name, ctxopts, genus);
    if (witness_cmd->parsed()) return cmd_witness(cfg, out, cls_name, ctxopts, genus);
    if (signatures->parsed()) {
      if (enum_cmd->parsed())
        return cmd_enumerate(cfg, out, measure, odd_periods, orbit_genus_max, min_period, periods);
      if (abel_cmd->parsed()) return cmd_abelianize(cfg, out, sig_text);
      if (chain_cmd->parsed()) return cmd_derived_chain(cfg, out, sig_text, depth);
    }
    if (group->parsed()) {
      if (classify_cmd->parsed()) return cmd_classify(cfg, out, group_spec);
      if (action_cmd->parsed()) return cmd_action(cfg, out, group_spec, sig_text);
    }
    if (tables->parsed() && verify_cmd->parsed()) return cmd_tables_verify(cfg, out);
    err << "no subcommand\n";
    return 1;
  } catch (const error& e) {
    if (e.code() == errc::no_rule || e.code() == errc::no_recipe) {
      err << "none: " << e.what() << "\n";
      return 2;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace surfbound
