#pragma once

// Affine mapping data of a cell: determinant J and the adjugate (cofactor
// matrix) of dx/dxi. Both are polynomial in the vertex coordinates, so they
// stay finite and well defined for zero-measure cells.

#include <Eigen/Dense>

#include "tfem/mesh.hpp"

namespace tfem {

struct MappingData {
  double J = 0.0;
  Eigen::Matrix3d cofactor = Eigen::Matrix3d::Zero();  // top-left dim x dim block used
  Eigen::Matrix3d F = Eigen::Matrix3d::Zero();         // dx/dxi columns
};

inline MappingData mapping_data(const Mesh& mesh, const Cell& cell) {
  MappingData md;
  const auto& p0 = mesh.point(cell.v[0]);
  if (mesh.dim == 2) {
    const auto& p1 = mesh.point(cell.v[1]);
    const auto& p2 = mesh.point(cell.v[2]);
    Eigen::Matrix2d F;
    F << p1[0] - p0[0], p2[0] - p0[0], p1[1] - p0[1], p2[1] - p0[1];
    md.J = F(0, 0) * F(1, 1) - F(0, 1) * F(1, 0);
    Eigen::Matrix2d C;
    C << F(1, 1), -F(0, 1), -F(1, 0), F(0, 0);
    md.cofactor.topLeftCorner<2, 2>() = C;
    md.F.topLeftCorner<2, 2>() = F;
    return md;
  }
  const auto& p1 = mesh.point(cell.v[1]);
  const auto& p2 = mesh.point(cell.v[2]);
  const auto& p3 = mesh.point(cell.v[3]);
  Eigen::Matrix3d F;
  F << p1[0] - p0[0], p2[0] - p0[0], p3[0] - p0[0],
       p1[1] - p0[1], p2[1] - p0[1], p3[1] - p0[1],
       p1[2] - p0[2], p2[2] - p0[2], p3[2] - p0[2];
  Eigen::Matrix3d C;  // adjugate: C * F = det(F) * I
  C(0, 0) = F(1, 1) * F(2, 2) - F(1, 2) * F(2, 1);
  C(0, 1) = F(0, 2) * F(2, 1) - F(0, 1) * F(2, 2);
  C(0, 2) = F(0, 1) * F(1, 2) - F(0, 2) * F(1, 1);
  C(1, 0) = F(1, 2) * F(2, 0) - F(1, 0) * F(2, 2);
  C(1, 1) = F(0, 0) * F(2, 2) - F(0, 2) * F(2, 0);
  C(1, 2) = F(0, 2) * F(1, 0) - F(0, 0) * F(1, 2);
  C(2, 0) = F(1, 0) * F(2, 1) - F(1, 1) * F(2, 0);
  C(2, 1) = F(0, 1) * F(2, 0) - F(0, 0) * F(2, 1);
  C(2, 2) = F(0, 0) * F(1, 1) - F(0, 1) * F(1, 0);
  md.J = F(0, 0) * C(0, 0) + F(0, 1) * C(1, 0) + F(0, 2) * C(2, 0);
  md.cofactor = C;
  md.F = F;
  return md;
}

}  // namespace tfem
