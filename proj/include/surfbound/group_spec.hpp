#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "surfbound/group.hpp"

namespace surfbound {

struct ConstructionCaps {
  int order_cap = kDefaultOrderCap;
};

// Group construction grammar:
//
//   spec    := factor (('x'|'*'|'×') factor)*           direct product
//   factor  := '(' spec ')'
//            | 'C' n [':' 'C' m '@' b]                  cyclic / split metacyclic,
//                                                       generator acting by x -> x^b
//            | 'MAT' q ':' 'C' p ['@' a ',' b]          (C_q x C_q) : C_p, the C_p
//                                                       generator acting by the
//                                                       companion matrix of
//                                                       x^2 + a*x + b over F_q
//                                                       (least valid (a,b) if omitted)
//            | 'Q8' | 'Sym' k | 'Alt' k (k <= 5)
//            | 'GL2' p (p prime <= 7)
//            | 'C4C4S3'                                 order-96 (C4 x C4) : Sym3
//
// ':' may be written as a semidirect-product sign and 'x' as a times sign.
FiniteGroup construct_group(const std::string& spec, const ConstructionCaps& caps = {});

FiniteGroup cyclic_group(long n, const ConstructionCaps& caps = {});
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b,
                           const ConstructionCaps& caps = {});
// C_m : C_n with the C_n generator acting by x -> x^b; requires b^n = 1 mod m.
FiniteGroup semidirect_cyclic(long m, long n, long twist, const ConstructionCaps& caps = {});
// (C_q x C_q) : C_p via the companion matrix of x^2 + a*x + b (irreducible,
// of multiplicative order p).  Least valid polynomial when `poly` is empty.
FiniteGroup matrix_semidirect(long q, long p, std::optional<std::pair<long, long>> poly,
                              const ConstructionCaps& caps = {});
FiniteGroup symmetric_group(int k, const ConstructionCaps& caps = {});
FiniteGroup alternating_group(int k, const ConstructionCaps& caps = {});
FiniteGroup quaternion_group(const ConstructionCaps& caps = {});
FiniteGroup general_linear_2(long p, const ConstructionCaps& caps = {});
// (C4 x C4) : Sym3 of order 96, Sym3 embedded in GL2(Z/4) as
// <[[0,-1],[1,-1]], [[0,1],[1,0]]>.
FiniteGroup c4c4_s3(const ConstructionCaps& caps = {});

// Reads the table format: line "order n", then n rows of n indices, then
// optional "label <i> <text>" lines; '#' starts a comment.  Re-verified.
FiniteGroup group_from_table_file(const std::string& path, const ConstructionCaps& caps = {});

// construct_group when the string parses as a spec, otherwise a table file.
FiniteGroup group_from_spec_or_file(const std::string& text, const ConstructionCaps& caps = {});

}  // namespace surfbound
