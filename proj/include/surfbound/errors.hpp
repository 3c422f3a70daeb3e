#pragma once

#include <stdexcept>
#include <string>

namespace surfbound {

// Error codes carried by every domain exception, so callers (and the CLI)
// can react to the kind of failure without parsing messages.
enum class errc {
  invalid_signature,
  non_integral_genus,
  genus_too_small,
  infinite_family,
  not_transitive,
  order_mismatch,
  product_not_identity,
  inconsistent_genus,
  infinite_abelianization,
  trivial_abelianization,
  invalid_twist,
  not_irreducible,
  size_cap,
  not_normal,
  prime_does_not_divide,
  unsupported_signature,
  no_rule,
  no_recipe,
  bad_input,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw error(code, std::string(errc_name(code)) + ": " + what);
}

}  // namespace surfbound
