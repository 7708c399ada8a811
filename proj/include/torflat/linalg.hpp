#pragma once

#include "torflat/numberfield.hpp"

#include <optional>
#include <string>
#include <vector>

namespace torflat {

using Vec = std::vector<NFElem>;
using Mat = std::vector<Vec>; // row-major
using IntMat = std::vector<std::vector<Integer>>;
using RatMat = std::vector<std::vector<Rational>>;

Vec zero_vec(int n);
Vec unit_vec(int n, int i);
Vec to_vec(const std::vector<Rational>& v);
bool is_zero_vec(const Vec& v);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(const NFElem& s, const Vec& a);
NFElem dot(const Vec& a, const Vec& b);

/// Reduced row echelon form over K; rows() are nonzero, pivots() increasing.
struct Rref {
    Mat rows;
    std::vector<int> pivots;
};
Rref rref(const Mat& m, int ncols);
int rank(const Mat& m, int ncols);
/// Basis of {x : m x = 0}.
Mat kernel(const Mat& m, int ncols);
/// One solution of m x = b, if any.
std::optional<Vec> solve(const Mat& m, const Vec& b, int ncols);
Mat inverse(const Mat& m);
Vec mat_vec(const Mat& m, const Vec& v);
Mat mat_mul(const Mat& a, const Mat& b);
Mat transpose(const Mat& m, int ncols);

enum class ScalarMode { Real, Complex };
std::string to_string(ScalarMode m);

/// i-action on the realification R^{2m} of C^m, coordinates (x_1..x_m, y_1..y_m).
Vec apply_j(const Vec& v);

/// Realification of a vector in K^m (K real, or closed under conjugation and
/// containing i): (Re v, Im v).
Vec realify(const Vec& v);
/// Inverse of realify: x + i y (requires i in K when y != 0).
Vec complexify(const Vec& v);

/// Real-linear subspace of R^N with entries in K (real-valued under the
/// designated embedding). In complex mode N = 2m and the subspace is
/// invariant under the i-action. The basis is kept in reduced row echelon
/// form, so equality is basis equality.
class Subspace {
  public:
    Subspace() = default;
    /// Span of realified vectors; complex mode closes the span under J.
    static Subspace span(int ambient, ScalarMode mode, const Mat& vectors);
    /// C-span of vectors in K^m, realified into R^{2m}.
    static Subspace complex_span(int m, const Mat& vectors);
    static Subspace zero(int ambient, ScalarMode mode);
    static Subspace full(int ambient, ScalarMode mode);

    int ambient() const { return ambient_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    ScalarMode mode() const { return mode_; }
    const Mat& basis() const { return basis_; }
    const std::vector<int>& pivots() const { return pivots_; }

    bool contains(const Vec& v) const;
    bool contains(const Subspace& o) const;
    bool equals(const Subspace& o) const;
    friend bool operator==(const Subspace& a, const Subspace& b) { return a.equals(b); }
    bool is_j_invariant() const;

    Subspace sum(const Subspace& o) const;
    Subspace intersect(const Subspace& o) const;
    /// Euclidean complement in the realified coordinates; for i-invariant
    /// subspaces it coincides with the Hermitian complement.
    Subspace orth_complement() const;
    /// Matrix M whose rows span the annihilator (M x = 0 exactly on this).
    Mat equations() const;
    /// v reduced modulo the subspace (pivot coordinates eliminated).
    Vec reduce(const Vec& v) const;
    /// Orthogonal projection onto the Euclidean complement.
    Vec project_to_complement(const Vec& v) const;
    /// C-basis of a complex-mode subspace as vectors in K^m.
    Mat complex_basis() const;
    /// Real dimension of the largest i-invariant subspace / C-dimension.
    int complex_dim() const { return dim() / 2; }
    Subspace with_mode(ScalarMode m) const;

    std::string str() const;

  private:
    int ambient_ = 0;
    ScalarMode mode_ = ScalarMode::Real;
    Mat basis_;
    std::vector<int> pivots_;
};

/// Affine subspace base + direction, base reduced modulo the direction so
/// that equal flats have identical representations.
class Flat {
  public:
    Flat() = default;
    Flat(Vec base, Subspace direction);

    const Vec& base() const { return base_; }
    const Subspace& direction() const { return direction_; }
    int ambient() const { return direction_.ambient(); }
    int dim() const { return direction_.dim(); }
    bool contains(const Vec& p) const;
    bool equals(const Flat& o) const;
    friend bool operator==(const Flat& a, const Flat& b) { return a.equals(b); }
    std::string str() const;

  private:
    Vec base_;
    Subspace direction_;
};

/// Intersection of two flats, or nullopt when empty.
std::optional<Flat> flat_intersect(const Flat& a, const Flat& b);

/// Full-rank lattice in R^N; columns of the basis matrix generate it.
class Lattice {
  public:
    Lattice() = default;
    /// basis[r][c] is entry (r, c); the columns generate the lattice.
    explicit Lattice(RatMat basis);
    static Lattice standard(int n);
    /// Z^m + i Z^m in the realified coordinates of C^m.
    static Lattice gaussian(int m) { return standard(2 * m); }

    int dim() const { return static_cast<int>(basis_.size()); }
    const RatMat& basis() const { return basis_; }
    const RatMat& inverse_basis() const { return inv_; }
    Vec to_lattice_coords(const Vec& x) const;
    Vec from_lattice_coords(const Vec& c) const;
    std::vector<Rational> to_lattice_coords(const std::vector<Rational>& x) const;
    std::vector<Rational> from_lattice_coords(const std::vector<Rational>& c) const;
    bool contains(const std::vector<Rational>& x) const;
    bool is_identity() const;

  private:
    RatMat basis_; // row r, column c
    RatMat inv_;
};

/// Column-style Hermite normal form: H = M U with U unimodular, H in column
/// echelon form with positive pivots and entries left of each pivot reduced
/// into [0, pivot).
struct HnfResult {
    IntMat H;
    IntMat U;
};
HnfResult hnf(const IntMat& m);
Integer int_det(const IntMat& m);
IntMat int_mul(const IntMat& a, const IntMat& b);

/// Z-basis of {x in Z^n : A x = 0} (a saturated sublattice).
IntMat integer_kernel(const IntMat& a, int ncols);
/// Z-basis (rows) of span_Q(rows) intersected with Z^n.
IntMat saturated_integer_basis(const RatMat& rows, int n);

/// Smallest subspace defined over the lattice containing h.
Subspace lambda_saturate(const Subspace& h, const Lattice& lattice);
/// Second route through the Galois conjugates of h's basis (Galois K only).
std::optional<Subspace> lambda_saturate_galois(const Subspace& h, const Lattice& lattice);
/// True if the subspace has a basis of lattice vectors.
bool defined_over(const Subspace& h, const Lattice& lattice);

} // namespace torflat
