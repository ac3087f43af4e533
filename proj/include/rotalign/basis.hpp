#pragma once

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "rotalign/errors.hpp"

namespace rotalign {

enum class Parity { even = 0, odd = 1 };

inline Parity parity_of(int n) { return (n % 2 == 0) ? Parity::even : Parity::odd; }

inline const char *to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

struct JM {
  int j = 0;
  int m = 0;
  friend bool operator==(const JM &, const JM &) = default;
};

/// Index map for the spherical-harmonic states |j,m> with j <= j_max, |m| <= j,
/// and fixed parities of j and m. The angular observables used here only couple
/// Δj, Δm in {0, ±2}, so each (j-parity, m-parity) block evolves independently.
///
/// Rows are ordered by j, then by m ascending.
class BasisBlock {
public:
  BasisBlock(Parity j_parity, Parity m_parity, int j_max)
      : j_parity_(j_parity), m_parity_(m_parity), j_max_(j_max) {
    if (j_max < 0)
      throw validation_error("BasisBlock: j_max must be non-negative");
    for (int j = first_j(); j <= j_max_; j += 2) {
      shell_offset_.push_back(static_cast<int>(states_.size()));
      for (int m = -j; m <= j; ++m)
        if (parity_of(m) == m_parity_)
          states_.push_back({j, m});
    }
  }

  Parity j_parity() const { return j_parity_; }
  Parity m_parity() const { return m_parity_; }
  int j_max() const { return j_max_; }
  int dim() const { return static_cast<int>(states_.size()); }

  bool contains(int j, int m) const {
    return j >= 0 && j <= j_max_ && std::abs(m) <= j && parity_of(j) == j_parity_ &&
           parity_of(m) == m_parity_;
  }

  /// Row of |j,m>, or nullopt when the state is not part of this block.
  std::optional<int> index(int j, int m) const {
    if (!contains(j, m))
      return std::nullopt;
    const int shell = (j - first_j()) / 2;
    // m runs over -j + k, k = 0, 1, ... skipping the wrong parity
    const int first_m = (parity_of(j) == m_parity_) ? -j : -j + 1;
    return shell_offset_[shell] + (m - first_m) / 2;
  }

  int row(int j, int m) const {
    auto r = index(j, m);
    if (!r)
      throw validation_error("BasisBlock: |" + std::to_string(j) + "," + std::to_string(m) +
                             "> is not in the block");
    return *r;
  }

  const JM &state(int row) const { return states_.at(static_cast<std::size_t>(row)); }
  const std::vector<JM> &states() const { return states_; }

  friend bool operator==(const BasisBlock &a, const BasisBlock &b) {
    return a.j_parity_ == b.j_parity_ && a.m_parity_ == b.m_parity_ && a.j_max_ == b.j_max_;
  }

private:
  int first_j() const { return j_parity_ == Parity::even ? 0 : 1; }

  Parity j_parity_;
  Parity m_parity_;
  int j_max_;
  std::vector<JM> states_;
  std::vector<int> shell_offset_;
};

/// Block containing |j,m> truncated at j_max.
inline BasisBlock block_for(int j, int m, int j_max) {
  return BasisBlock(parity_of(j), parity_of(m), j_max);
}

} // namespace rotalign
