#pragma once

#include <stdexcept>
#include <vector>

#include "dessins/coset_table.hpp"
#include "dessins/word.hpp"

namespace dessins {

struct ResourceExceeded : std::runtime_error {
  explicit ResourceExceeded(const std::string& what) : std::runtime_error(what) {}
};

// HLT-style coset enumeration of the subgroup generated by `subgens` in the
// triangle group with the given relator exponents.  Returns the standardized
// complete table on the subgroup's cosets; throws ResourceExceeded when more
// than max_cosets cosets would be required at any point.
CosetTable todd_coxeter(const Presentation& pres, const std::vector<Word>& subgens,
                        uint32_t max_cosets);

}  // namespace dessins
