#pragma once

#include "torflat/closure.hpp"
#include "torflat/interval.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace torflat {

/// Point of R^N / Lambda in lattice coordinates, each in [0, 1).
struct TorusPoint {
    std::vector<Interval> coords;

    std::vector<double> approx() const;
    std::string str() const;
};

/// Reduces a realified point of K^N modulo the lattice. Irrational entries
/// are enclosed at increasing precision up to `max_bits`; PrecisionEscalation
/// if an integer part stays undetermined.
TorusPoint fold(const Vec& x, const Lattice& lattice, long precision_bits = 64, long max_bits = 4096);
/// Same for a point given by enclosures of its ambient coordinates.
TorusPoint fold(const std::vector<Interval>& x, const Lattice& lattice);

/// Image of C + V^Lambda in the torus, prepared for distance queries.
class FoldedComponent {
  public:
    FoldedComponent(std::string name, TranslateSet c, Subspace v_lambda, const Lattice& lattice, ScalarMode mode);
    static FoldedComponent of(const ClosureComponent& c, const Lattice& lattice, ScalarMode mode);

    const std::string& name() const { return name_; }
    const TranslateSet& translates() const { return c_; }
    const Subspace& direction() const { return v_; }
    const Lattice& lattice() const { return lattice_; }
    ScalarMode mode() const { return mode_; }
    bool parametric() const { return c_.params && c_.params->size() > 0; }
    /// Realified translate point for member `m` at a parameter point.
    Vec translate(int m, const std::vector<NFElem>& params) const;

    /// Approximate quotient distance from an ambient lift to c + V + Lambda.
    double approx_distance(const std::vector<double>& x, const std::vector<double>& c) const;
    /// Certified upper bound of the same distance for a given translate.
    Rational upper_distance(const std::vector<Interval>& x, const Vec& c) const;

  private:
    /// Projected-lattice coefficients of the representative nearest to y
    /// (y already projected), with the approximate distance.
    std::pair<std::vector<long>, double> nearest(const std::vector<double>& y) const;

    std::string name_;
    TranslateSet c_;
    Subspace v_;
    Lattice lattice_;
    ScalarMode mode_;
    RatMat proj_;       // orthogonal projection onto the complement of V
    RatMat generators_; // basis (rows) of the projected lattice
    std::vector<std::vector<double>> proj_d_, gen_d_, gram_inv_d_;
    int window_ = 2;
};

struct DistanceResult {
    /// [heuristic lower bound, certified upper bound].
    Interval distance;
    int member = 0;
    std::vector<NFElem> params;
};

/// Distance in the torus from p to the folded component: minimum over
/// lattice representatives in a window and, for parametric translate sets,
/// a local search over the parameter chart seeded with `hints` and samples.
DistanceResult torus_distance(const TorusPoint& p, const FoldedComponent& comp,
                              const std::vector<std::vector<NFElem>>& hints = {});

struct PointRecord {
    long id = 0;
    std::string source;
    Rational radius;
    std::vector<double> folded;
    std::string nearest;
    Interval distance;
};

struct ComponentStats {
    std::string name;
    long hits = 0;          // points for which this component is nearest
    double max_upper = 0;  // largest certified distance among its hits
};

/// Mergeable summary of a verification run.
struct VerificationReport {
    std::string kind;
    Rational tol;
    std::vector<Rational> radii;
    Rational threshold;
    long samples = 0;
    std::vector<ComponentStats> components;
    std::vector<PointRecord> points;
    std::vector<PointRecord> failures;
    bool pass = true;

    // density runs
    long density_samples = 0;
    long grid_cells = 0;
    long covered_cells = 0;
    double max_distance_to_target = 0;
    int target_dim = 0;
    std::vector<std::pair<std::vector<double>, double>> probes; // probe point, min distance

    /// Associative and commutative combination of two partial reports.
    void merge(const VerificationReport& o);
};

/// Branch to sample for an attraction test; parametric branches are
/// evaluated at their parameter samples.
struct SampledBranch {
    std::string name;
    PuiseuxBranch branch;
};

struct AttractionOptions {
    std::vector<Rational> radii{Rational(100), Rational(1000), Rational(10000)};
    Rational threshold{1000};
    Rational tol{1, 20};
    int points_per_radius = 4;
    int params_per_branch = 3;
    long precision_bits = 64;
};

/// Samples unbounded points on the branches at growing radius, folds them
/// and checks that beyond the threshold radius each lies within tol of the
/// union of the folded components. Failures carry the offending point.
VerificationReport attraction_test(const std::vector<SampledBranch>& branches,
                                   const std::vector<FoldedComponent>& components, const Lattice& lattice,
                                   ScalarMode mode, const AttractionOptions& opt);

struct DensityOptions {
    long initial_samples = 1000;
    long max_samples = 100000;
    double epsilon = 0.05;
    std::uint64_t seed = 1;
    /// Points (lattice coordinates) whose distance to the folded samples is reported.
    std::vector<std::vector<double>> probes;
};

/// Samples points of V, folds them, and checks they stay within epsilon of
/// the folded saturation V^Lambda and cover it at resolution epsilon,
/// doubling the sample count until covered or max_samples is reached.
VerificationReport density_test(const Subspace& v, const Lattice& lattice, const DensityOptions& opt);

/// "x1,...,xN,component,distance" rows for the sampled points.
void write_csv(const VerificationReport& r, std::ostream& os);

} // namespace torflat
