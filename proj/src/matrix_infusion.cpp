#include "receptosim/matrix_infusion.hpp"

namespace receptosim::infusion {

std::vector<MatrixCell> make_cell_grid(int zone_id, const Eigen::Vector2d& centre_mm,
                                       double footprint_mm2, int per_side, int first_id) {
  if (per_side <= 0) throw std::invalid_argument("cell grid needs per_side >= 1");
  if (footprint_mm2 <= 0.0) throw std::invalid_argument("cell grid needs a positive footprint");
  const double side = std::sqrt(footprint_mm2);
  const double pitch = side / per_side;
  std::vector<MatrixCell> cells;
  cells.reserve(static_cast<std::size_t>(per_side) * per_side);
  int id = first_id;
  for (int j = 0; j < per_side; ++j) {
    for (int i = 0; i < per_side; ++i) {
      MatrixCell c;
      c.id = id++;
      c.zone_id = zone_id;
      c.position_mm = centre_mm + Eigen::Vector2d((i + 0.5) * pitch - 0.5 * side,
                                                  (j + 0.5) * pitch - 0.5 * side);
      cells.push_back(c);
    }
  }
  return cells;
}

}  // namespace receptosim::infusion
