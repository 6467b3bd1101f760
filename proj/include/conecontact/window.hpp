#pragma once

#include <cmath>

namespace conecontact {

// Rectangular region of the parameter plane with its sampling resolution.
struct Window {
    double pmin = -0.4, pmax = 0.4, qmin = -0.4, qmax = 0.4;
    int grid_n = 512;
    bool valid() const { return pmin < pmax && qmin < qmax && grid_n >= 16; }
    double diag() const { return std::hypot(pmax - pmin, qmax - qmin); }
    double cell_w() const { return (pmax - pmin) / grid_n; }
    double cell_h() const { return (qmax - qmin) / grid_n; }
    double cell_diag() const { return std::hypot(cell_w(), cell_h()); }
};

}  // namespace conecontact
