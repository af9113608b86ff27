// Shared test utilities: deterministic random generators for the various
// syntactic classes, file loading, and small enumerations.
#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ltt/depth.hpp"
#include "ltt/expr.hpp"
#include "ltt/judgement.hpp"
#include "ltt/sexpr.hpp"
#include "ltt/system.hpp"

namespace testutil {

using namespace ltt;
using Rng = std::mt19937_64;

inline unsigned pick(Rng& rng, unsigned n) {
  return std::uniform_int_distribution<unsigned>(0, n - 1)(rng);
}

inline std::string load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Locate the corpus directory relative to the test working directory.
inline std::string corpus_dir() {
  for (const char* c : {"corpus", "../corpus", "../../corpus"}) {
    std::ifstream probe(std::string(c) + "/manifest.txt");
    if (probe) return c;
  }
  throw std::runtime_error("corpus directory not found");
}

struct ManifestEntry {
  std::string file, system;
};

inline std::vector<ManifestEntry> load_manifest(const std::string& dir) {
  std::ifstream mf(dir + "/manifest.txt");
  std::vector<ManifestEntry> out;
  ManifestEntry e;
  while (mf >> e.file >> e.system) out.push_back(e);
  return out;
}

// -- random second-order-arithmetic syntax ----------------------------------

// closed arithmetic term built from zero/succ/plus/times, value kept small
inline ExprPtr rand_soa_term(Rng& rng, unsigned size_budget,
                             const std::vector<std::string>& vars = {}) {
  if (size_budget <= 1) {
    if (!vars.empty() && pick(rng, 3) == 0)
      return var(vars[pick(rng, (unsigned)vars.size())]);
    return pick(rng, 2) ? zero() : succ(zero());
  }
  switch (pick(rng, vars.empty() ? 3 : 4)) {
    case 0: return succ(rand_soa_term(rng, size_budget - 1, vars));
    case 1: {
      unsigned l = 1 + pick(rng, size_budget - 1);
      return plus(rand_soa_term(rng, l, vars),
                  rand_soa_term(rng, size_budget - l, vars));
    }
    case 2: {
      unsigned l = 1 + pick(rng, size_budget - 1);
      return times(rand_soa_term(rng, l, vars),
                   rand_soa_term(rng, size_budget - l, vars));
    }
    default: return var(vars[pick(rng, (unsigned)vars.size())]);
  }
}

inline unsigned soa_size(const ExprPtr& e) {
  unsigned n = 1;
  for (const auto& k : e->kids) n += soa_size(k);
  return n;
}

// -- brute-force depth oracles (independent recomputation) -------------------

inline std::optional<unsigned> brute_d(const ExprPtr& a) {
  switch (a->kind) {
    case Kind::TyNat: return 0u;
    case Kind::TySet: {
      auto i = brute_d(a->kids[0]);
      if (!i) return std::nullopt;
      return a->kids[0]->kind == Kind::TyNat ? 0u : *i + 1;
    }
    case Kind::TyProd: case Kind::TyArrow: {
      auto l = brute_d(a->kids[0]), r = brute_d(a->kids[1]);
      if (!l || !r) return std::nullopt;
      return std::max(*l, *r) + 1;
    }
    default: return std::nullopt;
  }
}

inline std::optional<unsigned> brute_D(const ExprPtr& a) {
  switch (a->kind) {
    case Kind::TyNat: case Kind::TyOf: return 0u;
    case Kind::TyUniv: return 1u;
    case Kind::TySet: {
      auto i = brute_D(a->kids[0]);
      if (!i) return std::nullopt;
      return *i == 0 ? 0u : *i + 1;
    }
    case Kind::TyProd: case Kind::TyArrow: {
      auto l = brute_D(a->kids[0]), r = brute_D(a->kids[1]);
      if (!l || !r) return std::nullopt;
      return (*l == 0 && *r == 0) ? 0u : std::max(*l, *r) + 1;
    }
    default: return std::nullopt;
  }
}

// random type within a chosen grammar level
enum class TyLevel { T2, UFree, WithU };

inline ExprPtr rand_type(Rng& rng, TyLevel lvl, unsigned size_budget) {
  if (lvl == TyLevel::T2)
    return pick(rng, 2) ? ty_nat() : ty_set(ty_nat());
  if (size_budget <= 1) {
    if (lvl == TyLevel::WithU && pick(rng, 4) == 0) return ty_univ();
    return ty_nat();
  }
  switch (pick(rng, lvl == TyLevel::WithU ? 5 : 4)) {
    case 0: return ty_nat();
    case 1: return ty_set(rand_type(rng, lvl, size_budget - 1));
    case 2: {
      unsigned l = 1 + pick(rng, size_budget - 1);
      return ty_prod(rand_type(rng, lvl, l),
                     rand_type(rng, lvl, size_budget - l));
    }
    case 3: {
      unsigned l = 1 + pick(rng, size_budget - 1);
      return ty_arrow(rand_type(rng, lvl, l),
                      rand_type(rng, lvl, size_budget - l));
    }
    default: return ty_univ();
  }
}

}  // namespace testutil
