#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hslab/minimizer.hpp"
#include "hslab/params.hpp"

namespace hslab {

enum class SweepAxis { Gamma, B, Q, A };

const char* to_string(SweepAxis a);

struct SweepPoint {
    double parameter = 0.0;
    double estimate = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    ConcentrationFlag flag = ConcentrationFlag::None;
    std::string error; // empty on success
};

struct SweepResult {
    SweepAxis axis = SweepAxis::Gamma;
    std::vector<SweepPoint> points;      // sorted by parameter value
    std::vector<Verdict> verdicts;       // one per point
    std::optional<double> bstar_estimate; // p = 2 bottom sweeps only
    double mazya_estimate = std::numeric_limits<double>::quiet_NaN(); // bottom sweeps
};

struct MeshSpec {
    int nr = 96;
    int ns = 96;
    double r_max = 20.0;
    Grading grading = Grading::LogGraded;
};

// Estimates S_{a,b,gamma}(q) at each gamma; points run in parallel and are
// aggregated in parameter order.  Per-point solver errors are recorded on
// the point, not thrown.
SweepResult sweep_gamma(const ParamSet& ps_base, const std::vector<double>& gammas,
                        const SolverConfig& cfg, const MeshSpec& mesh);

// p = 2 bottom sweep: estimates S_{a,b,b}(q) through the J_b form for each b,
// plus the Maz'ya constant once (b = 0); bstar_estimate is the smallest b
// whose estimate drops 3% below the Maz'ya estimate.
SweepResult sweep_bottom_b(const ParamSet& ps_base, const std::vector<double>& bs,
                           const SolverConfig& cfg, const MeshSpec& mesh);

// Nondecreasing within a relative tolerance band (solver noise).
bool nondecreasing_within(const std::vector<SweepPoint>& pts, double rel_tol);
// Strictly decreasing beyond a relative tolerance band.
bool strictly_decreasing_beyond(const std::vector<SweepPoint>& pts, double rel_tol);

// CSV "param,estimate,converged,flag".
std::string sweep_to_csv(const SweepResult& r);
// JSON sidecar carrying the verdicts (and bstar when present).
std::string sweep_verdicts_to_json(const SweepResult& r, const ParamSet& ps_base);

struct RegimeTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

// One row per ParamSet: regime, verdict, citations.
RegimeTable regime_table(const std::vector<ParamSet>& ps_list);

std::string table_to_markdown(const RegimeTable& t);
std::string table_to_csv(const RegimeTable& t);

} // namespace hslab
