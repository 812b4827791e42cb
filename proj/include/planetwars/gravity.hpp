#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "planetwars/params.hpp"
#include "planetwars/types.hpp"

namespace planetwars {

// Precomputed per-cell force vectors plus a per-cell planet index used for
// constant-time arrival checks. Immutable once built; shared by every copy
// of a game state.
class GravityField {
 public:
  static constexpr std::int32_t kEmpty = -1;
  static constexpr std::int32_t kAmbiguous = -2;

  GravityField() = default;

  int cell_size() const { return cell_size_; }
  int cols() const { return cols_; }
  int rows() const { return rows_; }
  std::span<const Vec2> grid() const { return grid_; }

  // Stored force of cell (col, row); both must be in range.
  const Vec2& cell(int col, int row) const {
    return grid_[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) +
                 static_cast<std::size_t>(col)];
  }
  Vec2 cell_center(int col, int row) const {
    return {(col + 0.5) * cell_size_, (row + 0.5) * cell_size_};
  }

  // Nearest-cell lookup; the zero vector outside the grid.
  Vec2 at(const Vec2& pos) const {
    const std::ptrdiff_t i = index_of(pos);
    return i < 0 ? Vec2{} : grid_[static_cast<std::size_t>(i)];
  }

  // Planet whose disc may contain pos: a planet id, kEmpty, or kAmbiguous
  // when several discs reach the cell.
  std::int32_t planet_hint(const Vec2& pos) const {
    const std::ptrdiff_t i = index_of(pos);
    return i < 0 ? kEmpty : occupancy_[static_cast<std::size_t>(i)];
  }

  friend GravityField compute_gravity_field(std::span<const Planet> planets,
                                            const GameParameters& p);

 private:
  std::ptrdiff_t index_of(const Vec2& pos) const {
    if (!(pos.x >= 0.0 && pos.y >= 0.0 && pos.x < width_ && pos.y < height_)) return -1;
    const auto col = static_cast<std::ptrdiff_t>(pos.x / cell_size_);
    const auto row = static_cast<std::ptrdiff_t>(pos.y / cell_size_);
    if (col >= cols_ || row >= rows_) return -1;
    return row * cols_ + col;
  }

  int cell_size_ = 1;
  double width_ = 0.0;   // cols * cell_size
  double height_ = 0.0;  // rows * cell_size
  int cols_ = 0;
  int rows_ = 0;
  std::vector<Vec2> grid_;
  std::vector<std::int32_t> occupancy_;
};

// Force exerted by one planet at a point: G * radius^2 / d^2 toward the
// planet, with d clamped below at the planet radius.
Vec2 planet_force(const Planet& planet, const Vec2& at, double gravitational_constant);

// Sums planet_force over all planets for every cell centre. Mirror pairs
// are summed together first so a point-symmetric map yields an exactly
// antisymmetric field.
GravityField compute_gravity_field(std::span<const Planet> planets, const GameParameters& p);

inline Vec2 gravity_at(const GravityField& field, const Vec2& pos) { return field.at(pos); }

// Process-wide count of compute_gravity_field calls, for instrumentation.
std::uint64_t gravity_field_computations();

}  // namespace planetwars
