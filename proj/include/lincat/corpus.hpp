#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lincat/term.hpp"

namespace lincat {

// Type-directed random term generation for the property suites.
struct CorpusOptions {
  int max_depth = 5;
  int max_type_depth = 2;
  std::vector<std::string> atoms = {"a", "b"};
};

TypeP random_type(std::mt19937_64& rng, const CorpusOptions& opts, int depth);
// a random well-typed morphism out of `source` (composition chain)
TermP random_term_from(std::mt19937_64& rng, const CorpusOptions& opts, const TypeP& source,
                       int depth);
// a random well-typed term with a random source
TermP random_term(std::mt19937_64& rng, const CorpusOptions& opts);

std::vector<TermP> corpus(uint64_t seed, size_t count, const CorpusOptions& opts = {});

}  // namespace lincat
