#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

#include "bits.hpp"
#include "errors.hpp"

namespace anticonc {

/// Default cap on the number of items (subsets, slice points, sign vectors)
/// an exhaustive routine may enumerate.
inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 33;

/// The enumeration cap, honouring the ANTICONC_BUDGET environment variable.
inline std::uint64_t enumeration_budget() {
  if (const char* env = std::getenv("ANTICONC_BUDGET"); env != nullptr && *env != '\0') {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw PreconditionError(std::string("ANTICONC_BUDGET is not an unsigned integer: ") + env);
    }
  }
  return kDefaultEnumerationBudget;
}

/// Throws BudgetExceeded unless `count` items fit in `budget`.
inline void require_budget(const mpz_class& count, std::uint64_t budget, const std::string& what) {
  if (count > mpz_class(std::to_string(budget))) {
    throw BudgetExceeded(what + " needs " + count.get_str() + " enumeration steps, budget is " +
                         std::to_string(budget));
  }
}

}  // namespace anticonc
