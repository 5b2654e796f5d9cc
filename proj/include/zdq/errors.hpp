#pragma once

#include <stdexcept>
#include <string>

namespace zdq {

enum class errc {
  non_stochastic_matrix,
  negative_entry,
  not_irreducible,
  not_irreducible_aperiodic,
  action_space_too_large,
  dimension_mismatch,
  zero_probability_symbol,
  tree_too_large,
  search_space_too_large,
  invalid_discount,
  no_convergence,
  incomplete_table,
  solve_failed,
  config_error,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

  // Process exit code convention: 2 config, 3 cap exceeded, 4 non-convergence.
  int exit_code() const {
    switch (code_) {
      case errc::action_space_too_large:
      case errc::tree_too_large:
      case errc::search_space_too_large:
        return 3;
      case errc::no_convergence:
      case errc::solve_failed:
        return 4;
      default:
        return 2;
    }
  }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace zdq
