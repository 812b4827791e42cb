#include "planetwars/gravity.hpp"

#include <algorithm>
#include <atomic>

namespace planetwars {

namespace {
std::atomic<std::uint64_t> g_field_computations{0};
}  // namespace

std::uint64_t gravity_field_computations() {
  return g_field_computations.load(std::memory_order_relaxed);
}

Vec2 planet_force(const Planet& planet, const Vec2& at, double gravitational_constant) {
  const Vec2 delta = planet.position - at;
  const double d = std::max(delta.norm(), planet.radius);
  const double mass = planet.radius * planet.radius;
  const double magnitude = gravitational_constant * mass / (d * d);
  return {magnitude * (delta.x / d), magnitude * (delta.y / d)};
}

GravityField compute_gravity_field(std::span<const Planet> planets, const GameParameters& p) {
  g_field_computations.fetch_add(1, std::memory_order_relaxed);

  GravityField field;
  const int cell = p.gravity_grid_cell;
  field.cell_size_ = cell;
  field.cols_ = (p.map_width + cell - 1) / cell;
  field.rows_ = (p.map_height + cell - 1) / cell;
  field.width_ = static_cast<double>(field.cols_) * cell;
  field.height_ = static_cast<double>(field.rows_) * cell;
  const auto cells = static_cast<std::size_t>(field.cols_) * static_cast<std::size_t>(field.rows_);
  field.grid_.assign(cells, Vec2{});
  field.occupancy_.assign(cells, GravityField::kEmpty);

  const double g = p.gravitational_constant;
  const std::size_t n = planets.size();
  const std::size_t paired = n - (n % 2);
  if (g != 0.0) {
    for (int row = 0; row < field.rows_; ++row) {
      for (int col = 0; col < field.cols_; ++col) {
        const Vec2 at = field.cell_center(col, row);
        Vec2 total;
        for (std::size_t i = 0; i < paired; i += 2) {
          total += planet_force(planets[i], at, g) + planet_force(planets[i + 1], at, g);
        }
        if (paired < n) total += planet_force(planets[n - 1], at, g);
        field.grid_[static_cast<std::size_t>(row) * static_cast<std::size_t>(field.cols_) +
                    static_cast<std::size_t>(col)] = total;
      }
    }
  }

  // Any point of a disc lies in a cell whose centre is within
  // radius + half a cell diagonal of the planet centre.
  const double half_diag = 0.5 * std::sqrt(2.0) * cell;
  for (const auto& planet : planets) {
    const double reach = planet.radius + half_diag;
    const int c0 = std::max(0, static_cast<int>(std::floor((planet.position.x - reach) / cell)));
    const int c1 = std::min(field.cols_ - 1,
                            static_cast<int>(std::floor((planet.position.x + reach) / cell)));
    const int r0 = std::max(0, static_cast<int>(std::floor((planet.position.y - reach) / cell)));
    const int r1 = std::min(field.rows_ - 1,
                            static_cast<int>(std::floor((planet.position.y + reach) / cell)));
    for (int row = r0; row <= r1; ++row) {
      for (int col = c0; col <= c1; ++col) {
        if ((field.cell_center(col, row) - planet.position).norm2() > reach * reach) continue;
        auto& slot = field.occupancy_[static_cast<std::size_t>(row) *
                                          static_cast<std::size_t>(field.cols_) +
                                      static_cast<std::size_t>(col)];
        slot = slot == GravityField::kEmpty ? planet.id : GravityField::kAmbiguous;
      }
    }
  }
  return field;
}

}  // namespace planetwars
