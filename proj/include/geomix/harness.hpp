#pragma once

#include <string>
#include <vector>

#include "geomix/geometry.hpp"
#include "geomix/structure.hpp"
#include "geomix/tiling.hpp"

namespace geomix {

struct SweepCell {
    double n = 0.0;
    int d = 2;
    double r = 0.0;
    std::vector<u64> seeds;
};

struct SweepPlan {
    std::vector<SweepCell> cells;
    std::string measurement = "relax";  // relax | mix_mc | iso | tiles | perc | chem
    std::string out_dir;
    std::vector<double> t_grid;
    u64 budget = 1000;
    double eps = 0.25;
    double tol = 1e-8;
    double delta = 0.5;
    std::string mode = "signed";  // abs | signed

    void validate() const;  // nonempty, valid configs, distinct seeds per cell
};

SweepPlan plan_from_json_file(const std::string& path);
SweepPlan plan_from_json_text(const std::string& text);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

struct ScalingPoint {
    double n = 0.0;
    double r = 0.0;
    double log_predictor = 0.0;  // log(n^{2/d} / r^2)
    double log_response = 0.0;   // log of the seed-median tau_rel
    std::vector<double> responses;  // per surviving seed
};

struct ScalingFit {
    std::vector<ScalingPoint> points;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<std::string> failures;  // per-seed failures, fit proceeds on survivors
};

// Least-squares fit on externally supplied (log predictor, median log response)
// points; the synthetic-slope self-test path.
ScalingFit fit_scaling(const std::vector<ScalingPoint>& points);

// Per cell: graph -> giant -> tau_rel (signed or abs per plan.mode), median
// over seeds; requires >= 4 surviving cells.
ScalingFit run_scaling(const SweepPlan& plan);

struct IsoSample {
    u64 size = 0;
    u64 boundary = 0;
    double ratio = 0.0;  // boundary / (|A|^{(d-1)/d} r^{d+1})
    bool meets_literal_lo = false;   // Thm-1.2-scale lower bound
    bool meets_practical_lo = false;
    bool meets_hi = false;
    bool connected = false;
};

struct IsoReport {
    std::vector<IsoSample> samples;
    double min_ratio = 0.0;
    double median_ratio = 0.0;
    double literal_lower_bound = 0.0;
    u64 practical_lower_bound = 0;
    u64 upper_bound = 0;
    u64 giant_size = 0;
    u64 window_rejections = 0;
};

// Connected-set sampler over the giant (BFS-ball growth, geometric target
// sizes) in the window [size_lo, (1-delta)|giant|]. The theorem's literal
// lower bound C1 (r^{2d+1} (log n)^{d/(d-1)})^d is recorded per sample but is
// far above desk scale; size_lo is the practical override.
IsoReport run_iso(const SweepPlan& plan, u64 samples, double delta, u64 size_lo = 64,
                  double C1 = 1.0);

// Dense-regime variant: uniform (not necessarily connected) subsets of the
// giant with |A| >= c2 r^d.
IsoReport run_large_radii_iso(const SweepPlan& plan, u64 samples, double c2 = 1.0);

struct RenormReport {
    std::vector<double> M_grid;
    std::vector<double> fraction;        // useful fraction among unclipped tiles, per M
    std::vector<u64> useful_counts;
    std::vector<u64> tile_counts;
    LineFit log_gap_fit;                 // log(1 - fraction) vs M
    double p_hat = 0.0;                  // fraction at the largest M
    double useful_largest_frac = 0.0;    // largest component of the useful field
    double bernoulli_largest_frac = 0.0; // same for a Bernoulli(p_hat) field
    bool saturated = false;              // any fraction hit 1 and used the half-count floor
};

RenormReport run_renormalization(const SweepPlan& plan, const std::vector<double>& M_grid);

struct D1Report {
    ScalingFit fit;
    std::vector<double> suffix_ratios;  // boundary / r^2 over sampled suffix sets
    bool complete_flag = false;         // some cell had r >= n (complete graph)
};

D1Report run_d1(const SweepPlan& plan, u64 suffix_samples);

// Giant reordered so local ids follow the first coordinate (the d=1 interval
// form expected by the banded eigensolver).
GiantSubgraph reorder_by_coordinate(const GiantSubgraph& g, int axis = 0);

// vertices.csv (id,x,y,in_giant,in_A,in_Aprime), edges.csv (i,j),
// tiles.csv (flag,a,b,side) over L_A with flag 1 = T_A, gridlines.csv
// (coordinate). d = 2 only; byte-stable.
void export_figure_csvs(const SpatialGraph& g, const std::vector<u32>& A,
                        const std::string& dir);

// D(alpha || p), the KL divergence between Bernoulli parameters.
double kl_tail(double alpha, double p);

void write_census_json(const CensusReport& census, const std::string& path);
void write_scaling_csv(const ScalingFit& fit, const std::string& path);
void write_iso_csv(const IsoReport& report, const std::string& path);

}  // namespace geomix
