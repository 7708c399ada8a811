#include "torflat/linalg.hpp"

#include "torflat/errors.hpp"

#include <sstream>

namespace torflat {

// ---------------------------------------------------------------- vectors

Vec zero_vec(int n) { return Vec(n, NFElem(0)); }

Vec unit_vec(int n, int i) {
    Vec v = zero_vec(n);
    v[i] = NFElem(1);
    return v;
}

Vec to_vec(const std::vector<Rational>& v) {
    Vec r;
    for (const auto& x : v)
        r.emplace_back(x);
    return r;
}

bool is_zero_vec(const Vec& v) {
    for (const auto& x : v)
        if (!x.is_zero())
            return false;
    return true;
}

Vec operator+(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        fail(ErrorCode::DimensionMismatch, "vector length mismatch");
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] += b[i];
    return r;
}

Vec operator-(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        fail(ErrorCode::DimensionMismatch, "vector length mismatch");
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] -= b[i];
    return r;
}

Vec operator*(const NFElem& s, const Vec& a) {
    Vec r = a;
    for (auto& x : r)
        x *= s;
    return r;
}

NFElem dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        fail(ErrorCode::DimensionMismatch, "vector length mismatch");
    NFElem s(0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero() && !b[i].is_zero())
            s += a[i] * b[i];
    return s;
}

// ---------------------------------------------------------------- matrices

Rref rref(const Mat& m, int ncols) {
    Mat a;
    for (const auto& row : m) {
        if (static_cast<int>(row.size()) != ncols)
            fail(ErrorCode::DimensionMismatch, "matrix row has wrong length");
        a.push_back(row);
    }
    Rref out;
    std::size_t r = 0;
    for (int col = 0; col < ncols && r < a.size(); ++col) {
        std::size_t piv = r;
        while (piv < a.size() && a[piv][col].is_zero())
            ++piv;
        if (piv == a.size())
            continue;
        std::swap(a[piv], a[r]);
        NFElem inv = a[r][col].inverse();
        for (auto& x : a[r])
            x *= inv;
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (k == r || a[k][col].is_zero())
                continue;
            NFElem f = a[k][col];
            for (int j = col; j < ncols; ++j)
                if (!a[r][j].is_zero())
                    a[k][j] -= f * a[r][j];
        }
        out.pivots.push_back(col);
        ++r;
    }
    a.resize(r);
    out.rows = std::move(a);
    return out;
}

int rank(const Mat& m, int ncols) { return static_cast<int>(rref(m, ncols).rows.size()); }

Mat kernel(const Mat& m, int ncols) {
    Rref e = rref(m, ncols);
    std::vector<bool> is_pivot(ncols, false);
    for (int p : e.pivots)
        is_pivot[p] = true;
    Mat out;
    for (int free = 0; free < ncols; ++free) {
        if (is_pivot[free])
            continue;
        Vec v = unit_vec(ncols, free);
        for (std::size_t r = 0; r < e.rows.size(); ++r)
            v[e.pivots[r]] = -e.rows[r][free];
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<Vec> solve(const Mat& m, const Vec& b, int ncols) {
    if (m.size() != b.size())
        fail(ErrorCode::DimensionMismatch, "right-hand side has wrong length");
    Mat aug;
    for (std::size_t i = 0; i < m.size(); ++i) {
        Vec row = m[i];
        row.push_back(b[i]);
        aug.push_back(std::move(row));
    }
    Rref e = rref(aug, ncols + 1);
    Vec x = zero_vec(ncols);
    for (std::size_t r = 0; r < e.rows.size(); ++r) {
        if (e.pivots[r] == ncols)
            return std::nullopt;
        x[e.pivots[r]] = e.rows[r][ncols];
    }
    return x;
}

Mat inverse(const Mat& m) {
    const int n = static_cast<int>(m.size());
    Mat aug;
    for (int i = 0; i < n; ++i) {
        Vec row = m[i];
        Vec id = unit_vec(n, i);
        row.insert(row.end(), id.begin(), id.end());
        aug.push_back(std::move(row));
    }
    Rref e = rref(aug, 2 * n);
    if (static_cast<int>(e.rows.size()) < n || e.pivots[n - 1] >= n)
        fail(ErrorCode::PreconditionFailed, "matrix is singular");
    Mat inv;
    for (int i = 0; i < n; ++i)
        inv.emplace_back(e.rows[i].begin() + n, e.rows[i].end());
    return inv;
}

Vec mat_vec(const Mat& m, const Vec& v) {
    Vec r;
    for (const auto& row : m)
        r.push_back(dot(row, v));
    return r;
}

Mat transpose(const Mat& m, int ncols) {
    Mat t(ncols, Vec(m.size(), NFElem(0)));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (int j = 0; j < ncols; ++j)
            t[j][i] = m[i][j];
    return t;
}

Mat mat_mul(const Mat& a, const Mat& b) {
    if (a.empty())
        return {};
    const int inner = static_cast<int>(b.size());
    const int nc = inner ? static_cast<int>(b[0].size()) : 0;
    Mat bt = transpose(b, nc);
    Mat r;
    for (const auto& row : a) {
        if (static_cast<int>(row.size()) != inner)
            fail(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
        Vec out;
        for (const auto& col : bt)
            out.push_back(dot(row, col));
        r.push_back(std::move(out));
    }
    return r;
}

// ---------------------------------------------------------------- realification

std::string to_string(ScalarMode m) { return m == ScalarMode::Real ? "real" : "complex"; }

Vec apply_j(const Vec& v) {
    const std::size_t m = v.size() / 2;
    Vec r(v.size());
    for (std::size_t k = 0; k < m; ++k) {
        r[k] = -v[m + k];
        r[m + k] = v[k];
    }
    return r;
}

Vec realify(const Vec& v) {
    Vec re, im;
    for (const auto& x : v) {
        auto [a, b] = real_imag_parts(x);
        re.push_back(a);
        im.push_back(b);
    }
    re.insert(re.end(), im.begin(), im.end());
    return re;
}

Vec complexify(const Vec& v) {
    const std::size_t m = v.size() / 2;
    Vec r;
    for (std::size_t k = 0; k < m; ++k) {
        if (v[m + k].is_zero()) {
            r.push_back(v[k]);
            continue;
        }
        FieldPtr f = common_field(v[k].field(), v[m + k].field());
        if (f->is_rational())
            f = NumberField::gaussian();
        if (!f->imaginary_unit())
            fail(ErrorCode::NotConjugationClosed, "field lacks i: cannot form x + iy in " + f->describe());
        r.push_back(v[k] + NFElem(f, *f->imaginary_unit()) * v[m + k]);
    }
    return r;
}

namespace {

bool is_real_valued(const NFElem& x) {
    if (x.is_rational() || x.field()->is_real())
        return true;
    if (!x.field()->conjugation())
        fail(ErrorCode::NotConjugationClosed, "field is not closed under conjugation: " + x.field()->describe());
    return x.conj() == x;
}

} // namespace

// ---------------------------------------------------------------- Subspace

Subspace Subspace::span(int ambient, ScalarMode mode, const Mat& vectors) {
    if (mode == ScalarMode::Complex && ambient % 2 != 0)
        fail(ErrorCode::DimensionMismatch, "complex-mode ambient dimension must be even");
    Mat all;
    for (const auto& v : vectors) {
        if (static_cast<int>(v.size()) != ambient)
            fail(ErrorCode::DimensionMismatch, "vector does not live in the ambient space");
        for (const auto& x : v)
            if (!is_real_valued(x))
                fail(ErrorCode::PreconditionFailed, "realified vectors must have real entries");
        all.push_back(v);
        if (mode == ScalarMode::Complex)
            all.push_back(apply_j(v));
    }
    Subspace s;
    s.ambient_ = ambient;
    s.mode_ = mode;
    Rref e = rref(all, ambient);
    s.basis_ = std::move(e.rows);
    s.pivots_ = std::move(e.pivots);
    return s;
}

Subspace Subspace::complex_span(int m, const Mat& vectors) {
    Mat real;
    for (const auto& v : vectors) {
        if (static_cast<int>(v.size()) != m)
            fail(ErrorCode::DimensionMismatch, "vector does not live in C^m");
        real.push_back(realify(v));
    }
    return span(2 * m, ScalarMode::Complex, real);
}

Subspace Subspace::zero(int ambient, ScalarMode mode) { return span(ambient, mode, {}); }

Subspace Subspace::full(int ambient, ScalarMode mode) {
    Mat id;
    for (int i = 0; i < ambient; ++i)
        id.push_back(unit_vec(ambient, i));
    return span(ambient, mode, id);
}

Vec Subspace::reduce(const Vec& v) const {
    if (static_cast<int>(v.size()) != ambient_)
        fail(ErrorCode::DimensionMismatch, "vector does not live in the ambient space");
    Vec r = v;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
        NFElem f = r[pivots_[k]];
        if (f.is_zero())
            continue;
        for (int j = 0; j < ambient_; ++j)
            if (!basis_[k][j].is_zero())
                r[j] -= f * basis_[k][j];
    }
    return r;
}

bool Subspace::contains(const Vec& v) const { return is_zero_vec(reduce(v)); }

bool Subspace::contains(const Subspace& o) const {
    if (o.ambient_ != ambient_)
        fail(ErrorCode::DimensionMismatch, "subspaces in different ambient spaces");
    for (const auto& b : o.basis_)
        if (!contains(b))
            return false;
    return true;
}

bool Subspace::equals(const Subspace& o) const {
    if (o.ambient_ != ambient_)
        fail(ErrorCode::DimensionMismatch, "subspaces in different ambient spaces");
    return pivots_ == o.pivots_ && basis_ == o.basis_;
}

bool Subspace::is_j_invariant() const {
    if (ambient_ % 2)
        return false;
    for (const auto& b : basis_)
        if (!contains(apply_j(b)))
            return false;
    return true;
}

namespace {

ScalarMode joint_mode(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient())
        fail(ErrorCode::DimensionMismatch, "subspaces in different ambient spaces");
    return a.mode() == ScalarMode::Complex && b.mode() == ScalarMode::Complex ? ScalarMode::Complex
                                                                              : ScalarMode::Real;
}

} // namespace

Subspace Subspace::sum(const Subspace& o) const {
    ScalarMode m = joint_mode(*this, o);
    Mat all = basis_;
    all.insert(all.end(), o.basis_.begin(), o.basis_.end());
    return span(ambient_, m, all);
}

Mat Subspace::equations() const { return kernel(basis_, ambient_); }

Subspace Subspace::orth_complement() const { return span(ambient_, mode_, equations()); }

Subspace Subspace::intersect(const Subspace& o) const {
    ScalarMode m = joint_mode(*this, o);
    Mat eqs = equations();
    Mat oe = o.equations();
    eqs.insert(eqs.end(), oe.begin(), oe.end());
    return span(ambient_, m, kernel(eqs, ambient_));
}

Vec Subspace::project_to_complement(const Vec& v) const {
    if (basis_.empty())
        return v;
    const int k = dim();
    Mat gram(k, Vec(k, NFElem(0)));
    Vec rhs;
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b)
            gram[a][b] = dot(basis_[a], basis_[b]);
        rhs.push_back(dot(basis_[a], v));
    }
    auto c = solve(gram, rhs, k);
    check_invariant(c.has_value(), "Gram matrix of a basis must be invertible");
    Vec r = v;
    for (int a = 0; a < k; ++a)
        r = r - (*c)[a] * basis_[a];
    return r;
}

Mat Subspace::complex_basis() const {
    if (mode_ != ScalarMode::Complex)
        fail(ErrorCode::PreconditionFailed, "complex basis requested for a real-mode subspace");
    const int m = ambient_ / 2;
    bool conj_stable = true;
    for (const auto& b : basis_) {
        Vec c = b;
        for (int k = 0; k < m; ++k)
            c[m + k] = -c[m + k];
        if (!contains(c)) {
            conj_stable = false;
            break;
        }
    }
    Mat out;
    if (conj_stable) {
        // V = U + iU with U = V intersected with R^m x 0.
        Mat eqs = equations();
        for (int k = 0; k < m; ++k)
            eqs.push_back(unit_vec(ambient_, m + k));
        Rref u = rref(kernel(eqs, ambient_), ambient_);
        for (const auto& row : u.rows)
            out.emplace_back(row.begin(), row.begin() + m);
        return out;
    }
    Subspace acc = zero(ambient_, ScalarMode::Complex);
    for (const auto& b : basis_) {
        if (acc.contains(b))
            continue;
        acc = acc.sum(span(ambient_, ScalarMode::Complex, {b}));
        out.push_back(complexify(b));
    }
    return out;
}

Subspace Subspace::with_mode(ScalarMode m) const {
    if (m == ScalarMode::Complex && !is_j_invariant())
        fail(ErrorCode::PreconditionFailed, "subspace is not invariant under the i-action");
    Subspace s = *this;
    s.mode_ = m;
    return s;
}

std::string Subspace::str() const {
    std::ostringstream os;
    os << to_string(mode_) << " dim " << dim() << " in R^" << ambient_ << " {";
    for (std::size_t k = 0; k < basis_.size(); ++k) {
        os << (k ? ", " : "") << "(";
        for (int j = 0; j < ambient_; ++j)
            os << (j ? "," : "") << basis_[k][j].str();
        os << ")";
    }
    os << "}";
    return os.str();
}

// ---------------------------------------------------------------- Flat

Flat::Flat(Vec base, Subspace direction) : base_(direction.reduce(base)), direction_(std::move(direction)) {}

bool Flat::contains(const Vec& p) const { return direction_.reduce(p) == base_; }

bool Flat::equals(const Flat& o) const { return direction_ == o.direction_ && base_ == o.base_; }

std::string Flat::str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t j = 0; j < base_.size(); ++j)
        os << (j ? "," : "") << base_[j].str();
    os << ") + " << direction_.str();
    return os.str();
}

std::optional<Flat> flat_intersect(const Flat& a, const Flat& b) {
    if (a.ambient() != b.ambient())
        fail(ErrorCode::DimensionMismatch, "flats in different ambient spaces");
    const int n = a.ambient();
    const auto& da = a.direction().basis();
    const auto& db = b.direction().basis();
    const int ka = static_cast<int>(da.size()), kb = static_cast<int>(db.size());
    // base_a + sum u_j da_j = base_b + sum w_j db_j
    Mat sys(n, Vec(ka + kb, NFElem(0)));
    for (int r = 0; r < n; ++r) {
        for (int j = 0; j < ka; ++j)
            sys[r][j] = da[j][r];
        for (int j = 0; j < kb; ++j)
            sys[r][ka + j] = -db[j][r];
    }
    auto sol = solve(sys, b.base() - a.base(), ka + kb);
    if (!sol)
        return std::nullopt;
    Vec p = a.base();
    for (int j = 0; j < ka; ++j)
        p = p + (*sol)[j] * da[j];
    return Flat(p, a.direction().intersect(b.direction()));
}

// ---------------------------------------------------------------- Lattice

Lattice::Lattice(RatMat basis) : basis_(std::move(basis)) {
    const int n = static_cast<int>(basis_.size());
    Mat m;
    for (const auto& row : basis_) {
        if (static_cast<int>(row.size()) != n)
            fail(ErrorCode::DimensionMismatch, "lattice basis must be square");
        m.push_back(to_vec(row));
    }
    Mat inv = inverse(m);
    for (const auto& row : inv) {
        std::vector<Rational> r;
        for (const auto& x : row)
            r.push_back(x.rational_value());
        inv_.push_back(std::move(r));
    }
}

Lattice Lattice::standard(int n) {
    RatMat id(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i)
        id[i][i] = 1;
    return Lattice(id);
}

namespace {

Vec rat_mat_vec(const RatMat& m, const Vec& v) {
    if (m.size() != v.size())
        fail(ErrorCode::DimensionMismatch, "vector does not match the lattice dimension");
    Vec r;
    for (const auto& row : m) {
        NFElem s(0);
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] != 0 && !v[j].is_zero())
                s += NFElem(row[j]) * v[j];
        r.push_back(s);
    }
    return r;
}

std::vector<Rational> rat_mat_vec(const RatMat& m, const std::vector<Rational>& v) {
    if (m.size() != v.size())
        fail(ErrorCode::DimensionMismatch, "vector does not match the lattice dimension");
    std::vector<Rational> r;
    for (const auto& row : m) {
        Rational s = 0;
        for (std::size_t j = 0; j < row.size(); ++j)
            s += row[j] * v[j];
        r.push_back(s);
    }
    return r;
}

} // namespace

Vec Lattice::to_lattice_coords(const Vec& x) const { return rat_mat_vec(inv_, x); }
Vec Lattice::from_lattice_coords(const Vec& c) const { return rat_mat_vec(basis_, c); }
std::vector<Rational> Lattice::to_lattice_coords(const std::vector<Rational>& x) const {
    return rat_mat_vec(inv_, x);
}
std::vector<Rational> Lattice::from_lattice_coords(const std::vector<Rational>& c) const {
    return rat_mat_vec(basis_, c);
}

bool Lattice::contains(const std::vector<Rational>& x) const {
    for (const auto& c : to_lattice_coords(x))
        if (c.get_den() != 1)
            return false;
    return true;
}

bool Lattice::is_identity() const {
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j)
            if (basis_[i][j] != (i == j ? 1 : 0))
                return false;
    return true;
}

// ---------------------------------------------------------------- HNF

namespace {

void col_combine(IntMat& m, int a, int b, const Integer& s, const Integer& t, const Integer& u, const Integer& v) {
    // col_a <- s col_a + t col_b ; col_b <- u col_a + v col_b
    for (auto& row : m) {
        Integer x = row[a], y = row[b];
        row[a] = s * x + t * y;
        row[b] = u * x + v * y;
    }
}

void col_addmul(IntMat& m, int dst, int src, const Integer& q) {
    for (auto& row : m)
        row[dst] -= q * row[src];
}

} // namespace

HnfResult hnf(const IntMat& m) {
    const int rows = static_cast<int>(m.size());
    const int cols = rows ? static_cast<int>(m[0].size()) : 0;
    HnfResult res{m, IntMat(cols, std::vector<Integer>(cols, Integer(0)))};
    for (int i = 0; i < cols; ++i)
        res.U[i][i] = 1;
    IntMat& H = res.H;
    IntMat& U = res.U;
    int k = 0;
    for (int i = 0; i < rows && k < cols; ++i) {
        for (int j = k + 1; j < cols; ++j) {
            if (H[i][j] == 0)
                continue;
            Integer g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), H[i][k].get_mpz_t(), H[i][j].get_mpz_t());
            Integer u = -H[i][j] / g, v = H[i][k] / g;
            col_combine(H, k, j, s, t, u, v);
            col_combine(U, k, j, s, t, u, v);
        }
        if (H[i][k] == 0)
            continue;
        if (H[i][k] < 0) {
            for (auto& row : H)
                row[k] = -row[k];
            for (auto& row : U)
                row[k] = -row[k];
        }
        for (int j = 0; j < k; ++j) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), H[i][j].get_mpz_t(), H[i][k].get_mpz_t());
            if (q != 0) {
                col_addmul(H, j, k, q);
                col_addmul(U, j, k, q);
            }
        }
        ++k;
    }
    return res;
}

Integer int_det(const IntMat& m) {
    const int n = static_cast<int>(m.size());
    Mat a;
    for (const auto& row : m) {
        Vec r;
        for (const auto& x : row)
            r.emplace_back(Rational(x));
        a.push_back(std::move(r));
    }
    // Gaussian elimination over Q; the determinant is an integer.
    Rational det = 1;
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && a[p][c].is_zero())
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c].rational_value();
        NFElem inv = a[c][c].inverse();
        for (int r = c + 1; r < n; ++r) {
            if (a[r][c].is_zero())
                continue;
            NFElem f = a[r][c] * inv;
            for (int j = c; j < n; ++j)
                a[r][j] -= f * a[c][j];
        }
    }
    check_invariant(det.get_den() == 1, "integer determinant must be integral");
    return det.get_num();
}

IntMat int_mul(const IntMat& a, const IntMat& b) {
    const std::size_t n = a.size(), inner = b.size(), c = inner ? b[0].size() : 0;
    IntMat r(n, std::vector<Integer>(c, Integer(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < inner; ++k)
            for (std::size_t j = 0; j < c; ++j)
                r[i][j] += a[i][k] * b[k][j];
    return r;
}

IntMat integer_kernel(const IntMat& a, int ncols) {
    IntMat m = a;
    if (m.empty()) {
        IntMat id(ncols, std::vector<Integer>(ncols, Integer(0)));
        for (int i = 0; i < ncols; ++i)
            id[i][i] = 1;
        return id;
    }
    HnfResult h = hnf(m);
    int r = 0;
    for (int j = 0; j < ncols; ++j) {
        bool nz = false;
        for (const auto& row : h.H)
            nz |= row[j] != 0;
        if (nz)
            r = j + 1;
    }
    IntMat out;
    for (int j = r; j < ncols; ++j) {
        std::vector<Integer> v;
        for (int i = 0; i < ncols; ++i)
            v.push_back(h.U[i][j]);
        out.push_back(std::move(v));
    }
    return out;
}

namespace {

std::vector<Integer> clear_denominators(const Vec& v) {
    Integer l = 1;
    for (const auto& x : v)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.rational_value().get_den_mpz_t());
    std::vector<Integer> r;
    for (const auto& x : v) {
        Rational y = x.rational_value() * Rational(l);
        r.push_back(y.get_num());
    }
    return r;
}

} // namespace

IntMat saturated_integer_basis(const RatMat& rows, int n) {
    Mat m;
    for (const auto& r : rows)
        m.push_back(to_vec(r));
    IntMat ann;
    for (const auto& v : kernel(m, n))
        ann.push_back(clear_denominators(v));
    return integer_kernel(ann, n);
}

// ---------------------------------------------------------------- saturation

namespace {

Subspace finish_saturation(const Subspace& h, const Lattice& lattice, const std::vector<std::vector<Rational>>& coords) {
    Mat back;
    for (const auto& c : coords)
        back.push_back(to_vec(lattice.from_lattice_coords(c)));
    Subspace s = Subspace::span(h.ambient(), ScalarMode::Real, back);
    if (h.mode() == ScalarMode::Complex && s.is_j_invariant())
        s = s.with_mode(ScalarMode::Complex);
    return s;
}

} // namespace

Subspace lambda_saturate(const Subspace& h, const Lattice& lattice) {
    if (h.ambient() != lattice.dim())
        fail(ErrorCode::DimensionMismatch, "subspace and lattice live in different ambient spaces");
    std::vector<std::vector<Rational>> coords;
    for (const auto& b : h.basis()) {
        Vec c = lattice.to_lattice_coords(b);
        for (auto& v : rational_coefficient_vectors(c))
            coords.push_back(std::move(v));
    }
    return finish_saturation(h, lattice, coords);
}

std::optional<Subspace> lambda_saturate_galois(const Subspace& h, const Lattice& lattice) {
    if (h.ambient() != lattice.dim())
        fail(ErrorCode::DimensionMismatch, "subspace and lattice live in different ambient spaces");
    FieldPtr k = NumberField::rationals();
    for (const auto& b : h.basis())
        for (const auto& x : b)
            k = common_field(k, x.field());
    if (!k->is_galois())
        return std::nullopt;
    const int n = h.ambient();
    Mat conj;
    for (const auto& b : h.basis()) {
        Vec c = lattice.to_lattice_coords(b);
        for (std::size_t s = 0; s < k->automorphisms().size(); ++s) {
            Vec img;
            for (const auto& x : c)
                img.push_back(x.lift_to(k).apply_automorphism(static_cast<int>(s)));
            conj.push_back(std::move(img));
        }
    }
    // A Galois-stable K-subspace has a rational reduced echelon basis.
    Rref e = rref(conj, n);
    std::vector<std::vector<Rational>> coords;
    for (const auto& row : e.rows) {
        std::vector<Rational> r;
        for (const auto& x : row) {
            check_invariant(x.is_rational(), "Galois-stable span must have a rational echelon basis");
            r.push_back(x.rational_value());
        }
        coords.push_back(std::move(r));
    }
    return finish_saturation(h, lattice, coords);
}

bool defined_over(const Subspace& h, const Lattice& lattice) {
    Mat coords;
    for (const auto& b : h.basis())
        coords.push_back(lattice.to_lattice_coords(b));
    Rref e = rref(coords, h.ambient());
    for (const auto& row : e.rows)
        for (const auto& x : row)
            if (!x.is_rational())
                return false;
    return true;
}

} // namespace torflat
