#pragma once

#include <array>
#include <string>

#include "shadowlab/params.hpp"
#include "shadowlab/planar.hpp"

namespace shadowlab {

using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;
using Mat3 = std::array<std::array<double, 3>, 3>;

// Atlas regions. The two rest-point charts are joined by the transit tube;
// orbits leaving the modelled neighbourhoods are absorbed into far states
// (toward the attractor on the p side, the repeller behind q backward).
enum class Region { ChartP, ChartQ, Transit, FarS, FarU };

std::string region_name(Region r);

// Chart-tagged point of the model.
//  ChartP / ChartQ : c = chart-relative coordinates (x1, x2, x3, x4).
//  Transit         : off = section offsets (x2, x3, x4), elapsed in [0, T_a].
//  FarS / FarU     : c = boundary snapshot in the exit chart's coordinates,
//                    beyond = time already spent past the absorbing boundary
//                    (forward time for FarS, backward time for FarU).
struct ManifoldState {
    Region region = Region::ChartP;
    Vec4 c{};
    Vec3 off{};
    double elapsed = 0.0;
    double beyond = 0.0;

    static ManifoldState chart_p(const Vec4& coords);
    static ManifoldState chart_q(const Vec4& coords);
    static ManifoldState transit(const Vec3& offsets, double elapsed);

    PlanarPoint planar() const; // spiral block: (x3,x4) in ChartP, (x2,x4) in ChartQ
    double x1() const { return c[0]; }
};

// True section-to-section map along the heteroclinic corridor, S_q -> S_p,
// between the section {x1 = -c_q} in ChartQ and {x1 = c_p} in ChartP,
// together with its linearization at the corridor. The linearization is
// diagonal in the offset coordinates (x2, x3, x4); the true map carries the
// radius-dependent winding of the planar blocks and is *not* linear.
struct SectionMap {
    double c_p = 1.0, c_q = 1.0;
    double t_q = 0.0;        // ChartQ segment duration, -ln(c_q)
    double t_p = 0.0;        // ChartP segment duration, -ln(c_p)
    double total_time = 0.0; // t_q + T_a + t_p
    Mat3 linear{};

    Vec3 apply_linear(const Vec3& w) const;
};

class Model {
  public:
    explicit Model(const ValidatedParams& vp);

    const Params& params() const { return P_.get(); }
    const ValidatedParams& validated() const { return P_; }
    const WindingProfile& profile() const { return prof_; }

    // Vector field in chart coordinates. Throws ChartError off the charts.
    Vec4 field(const ManifoldState& s) const;

    // Closed-form flow that must stay within the current chart for the whole
    // of [0, t]; throws ChartExitError carrying the first crossing time.
    ManifoldState flow_chart(double t, const ManifoldState& s) const;

    // Transit-tube endpoint map: ChartQ section point (-1, x2, x3, x4) to
    // ChartP section point (1, x2, x3, x4), offsets preserved exactly.
    // Throws TubeExitError when an offset reaches the tube half-width.
    ManifoldState transit_map(const ManifoldState& s) const;

    // Global flow across charts, tube and far states. Histories the atlas
    // cannot represent raise ModelBoundaryError.
    ManifoldState flow(double t, const ManifoldState& s) const;

    // The heteroclinic trajectory, anchored so alpha(0) is the ChartP section
    // point (1,0,0,0) and alpha(-T_a) the ChartQ section point (-1,0,0,0).
    ManifoldState alpha(double t) const;

    // Corridor coordinate: strictly increasing along the q -> p passage,
    // equal to chart x1-displacement inside each chart. Defined for the
    // three in-atlas regions.
    double corridor_coordinate(const ManifoldState& s) const;

    // Model metric. Chartwise Euclidean; across regions combines the corridor
    // coordinate gap with the offset gap. Far states sit at distance zero
    // from their own kind and far from everything else.
    double distance(const ManifoldState& s1, const ManifoldState& s2) const;
    static double far_distance() { return 1e3; }

    // Section-to-section data for levels c_p, c_q in (0, 1].
    SectionMap section_map(double c_p, double c_q) const;

    // The tube endpoints admit two representations (chart section state or
    // transit state at an end); these force the chart-side one.
    ManifoldState as_p_section(const ManifoldState& s) const;
    ManifoldState as_q_section(const ManifoldState& s) const;
    // True (nonlinear) section map; throws TubeExitError if the passage
    // leaves the tube.
    Vec3 section_map_apply_true(const SectionMap& sm, const Vec3& w) const;

  private:
    ManifoldState flow_chart_p_raw(double t, const ManifoldState& s) const;
    ManifoldState flow_chart_q_raw(double t, const ManifoldState& s) const;

    ValidatedParams P_;
    WindingProfile prof_;
};

} // namespace shadowlab
