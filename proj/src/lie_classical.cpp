#include "hkpot/lie_classical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "hkpot/matrix_core.hpp"

namespace hkpot {

std::string to_string(Family f) {
  switch (f) {
    case Family::SL: return "sl";
    case Family::SO: return "so";
    case Family::SP: return "sp";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  if (s == "sl") return Family::SL;
  if (s == "so") return Family::SO;
  if (s == "sp") return Family::SP;
  throw InputError("unknown algebra family '" + s + "' (expected sl, so or sp)");
}

AlgebraKind AlgebraKind::make(Family family, int n) {
  if (n < 1) throw InputError("algebra dimension must be positive");
  if (family == Family::SP && n % 2 != 0) throw InputError("sp(n) needs even n");
  return AlgebraKind{family, n};
}

BilinearForm AlgebraKind::representative_form() const {
  switch (family) {
    case Family::SL: return BilinearForm::identity(n);
    case Family::SO: return BilinearForm::anti_diagonal(n);
    case Family::SP: return BilinearForm::standard_symplectic(n);
  }
  return BilinearForm::identity(n);
}

BilinearForm AlgebraKind::standard_form() const {
  return family == Family::SP ? BilinearForm::standard_symplectic(n) : BilinearForm::identity(n);
}

// ---------------------------------------------------------------------------
// JordanType

JordanType::JordanType(std::vector<int> p) : parts(std::move(p)) {
  if (parts.empty()) throw InputError("Jordan type must have at least one part");
  for (int q : parts)
    if (q <= 0) throw InputError("Jordan type parts must be positive");
  std::sort(parts.begin(), parts.end(), std::greater<>());
}

int JordanType::size() const {
  int s = 0;
  for (int q : parts) s += q;
  return s;
}

int JordanType::longest() const { return parts.empty() ? 0 : parts.front(); }

int JordanType::count(int part) const {
  return static_cast<int>(std::count(parts.begin(), parts.end(), part));
}

int JordanType::rank_of_power(int j) const {
  int r = 0;
  for (int q : parts) r += std::max(q - j, 0);
  return r;
}

bool JordanType::valid_for(Family f) const {
  if (f == Family::SL) return true;
  const int bad_parity = f == Family::SO ? 0 : 1;  // so: even parts pair, sp: odd parts pair
  std::map<int, int> counts;
  for (int q : parts) ++counts[q];
  for (const auto& [q, c] : counts)
    if (q % 2 == bad_parity && c % 2 != 0) return false;
  return true;
}

std::string JordanType::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
  return os.str();
}

namespace {

int rank_against(const CMatrix& m, double scale, const Tolerances& tol) {
  if (m.size() == 0 || scale == 0.0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol.rank_cut * scale) ++r;
  return r;
}

}  // namespace

JordanType jordan_type_of(const CMatrix& x, const Tolerances& tol) {
  if (x.rows() != x.cols()) throw InputError("jordan_type_of: matrix is not square");
  const int n = static_cast<int>(x.rows());
  if (n == 0) throw InputError("jordan_type_of: empty matrix");
  // Powers are compared against |X|_2^j, not their own largest singular
  // value, so rounding noise in a vanishing power reads as rank 0.
  Eigen::JacobiSVD<CMatrix> svd(x);
  const double sigma = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  std::vector<int> ranks{n};
  CMatrix power = CMatrix::Identity(n, n);
  while (ranks.back() > 0) {
    if (static_cast<int>(ranks.size()) > n) throw InputError("jordan_type_of: matrix is not nilpotent");
    power = power * x;
    const int j = static_cast<int>(ranks.size());
    ranks.push_back(rank_against(power, std::pow(sigma, j), tol));
  }
  std::vector<int> parts;
  for (std::size_t j = 1; j < ranks.size(); ++j) {
    const int at_least_j = ranks[j - 1] - ranks[j];
    const int at_least_next = j + 1 < ranks.size() ? ranks[j] - ranks[j + 1] : 0;
    for (int c = 0; c < at_least_j - at_least_next; ++c) parts.push_back(static_cast<int>(j));
  }
  if (parts.empty() || [&] {
        int s = 0;
        for (int q : parts) s += q;
        return s != n;
      }())
    throw NumericalError("jordan_type_of: inconsistent rank sequence");
  return JordanType(parts);
}

// ---------------------------------------------------------------------------
// validation

std::string ValidationReport::describe() const {
  std::ostringstream os;
  if (!square) os << "matrix is not square; ";
  if (!form_matches) os << "form does not match the algebra; ";
  if (!trace_ok) os << "trace residual " << trace_residual << "; ";
  if (!membership_ok) os << "form-skewness residual " << membership_residual << "; ";
  if (!nilpotent) os << "nilpotency residual " << nilpotency_residual << "; ";
  std::string s = os.str();
  return s.empty() ? "ok" : s.substr(0, s.size() - 2);
}

ValidationReport validate(const OrbitElement& elem, const Tolerances& tol) {
  ValidationReport rep;
  const CMatrix& x = elem.matrix;
  const int n = elem.algebra.n;
  if (x.rows() != x.cols() || x.rows() != n) {
    rep.square = false;
    return rep;
  }
  const double scale = std::max(1.0, x.norm());
  rep.trace_residual = std::abs(x.trace()) / scale;
  rep.trace_ok = rep.trace_residual <= 1e-12;

  switch (elem.algebra.family) {
    case Family::SL:
      rep.form_matches = elem.form.dim() == n;
      break;
    case Family::SO:
      rep.form_matches = elem.form.dim() == n && elem.form.symmetry() == 1;
      break;
    case Family::SP:
      rep.form_matches = elem.form.dim() == n && elem.form.symmetry() == -1;
      break;
  }
  if (!rep.form_matches) return rep;
  if (elem.algebra.family != Family::SL) {
    const CMatrix& w = elem.form.matrix();
    rep.membership_residual = (x.transpose() * w + w * x).norm() / scale;
    rep.membership_ok = rep.membership_residual <= tol.check_tol;
  }
  const CMatrix xn = matrix_power(x, n);
  rep.nilpotency_residual = xn.norm() / std::pow(scale, n);
  rep.nilpotent = rep.nilpotency_residual <= tol.check_tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Jordan representatives

namespace {

Complex scale_at(const std::vector<Complex>& scales, std::size_t i) {
  return i < scales.size() ? scales[i] : Complex(1.0, 0.0);
}

// Odd block in the anti-diagonal convention of its own size: superdiagonal
// signs alternate so the block is skew about the anti-diagonal.
CMatrix odd_selfdual_block(int p, Complex s) {
  CMatrix b = CMatrix::Zero(p, p);
  for (int i = 0; i + 1 < p; ++i) b(i, i + 1) = (i % 2 == 0 ? 1.0 : -1.0) * s;
  return b;
}

CMatrix sl_representative(const JordanType& jt, const std::vector<Complex>& scales) {
  const int n = jt.size();
  CMatrix x = CMatrix::Zero(n, n);
  int off = 0;
  for (std::size_t b = 0; b < jt.parts.size(); ++b) {
    const int p = jt.parts[b];
    for (int i = 0; i + 1 < p; ++i) x(off + i, off + i + 1) = scale_at(scales, b);
    off += p;
  }
  return x;
}

CMatrix so_representative(const JordanType& jt, const std::vector<Complex>& scales) {
  const int n = jt.size();
  std::map<int, int, std::greater<>> counts;
  for (int q : jt.parts) ++counts[q];
  std::vector<int> pairs, singles;
  for (const auto& [q, c] : counts) {
    for (int i = 0; i < c / 2; ++i) pairs.push_back(q);
    if (c % 2) singles.push_back(q);
  }
  CMatrix x = CMatrix::Zero(n, n);
  auto set_mirrored = [&](int i, int j, Complex v) {
    x(i, j) = v;
    x(n - 1 - j, n - 1 - i) = -v;
  };
  std::size_t block = 0;
  int off = 0;
  for (int p : pairs) {
    const Complex s = scale_at(scales, block++);
    for (int i = 0; i + 1 < p; ++i) set_mirrored(off + i, off + i + 1, s);
    off += p;
  }
  int centre = 0;
  for (int p : singles) centre += p;
  if (singles.size() == 1) {
    x.block(off, off, centre, centre) = odd_selfdual_block(centre, scale_at(scales, block));
  } else if (singles.size() > 1) {
    // Several self-paired odd blocks cannot share the single middle index:
    // build them skew-symmetric, then move the centre to anti-diagonal form.
    CMatrix skew = CMatrix::Zero(centre, centre);
    int o = 0;
    for (int p : singles) {
      const CMatrix q = build_Q(p);
      skew.block(o, o, p, p) = q.adjoint() * odd_selfdual_block(p, scale_at(scales, block++)) * q;
      o += p;
    }
    const CMatrix qc = build_Q(centre);
    x.block(off, off, centre, centre) = qc * skew * qc.adjoint();
  }
  return x;
}

CMatrix sp_representative(const JordanType& jt, const std::vector<Complex>& scales) {
  const int n = jt.size();
  const int m = n / 2;
  std::map<int, int, std::greater<>> counts;
  for (int q : jt.parts) ++counts[q];
  CMatrix x = CMatrix::Zero(n, n);
  std::size_t block = 0;
  int off = 0;
  for (const auto& [q, c] : counts) {
    const bool odd = q % 2 != 0;
    const int nblocks = odd ? c / 2 : c;
    const int half = odd ? q : q / 2;
    for (int b = 0; b < nblocks; ++b) {
      const Complex s = scale_at(scales, block++);
      for (int i = 0; i + 1 < half; ++i) {
        x(off + i, off + i + 1) = s;
        x(m + off + i + 1, m + off + i) = -s;
      }
      if (!odd) x(off + half - 1, m + off + half - 1) = s;
      off += half;
    }
  }
  return x;
}

}  // namespace

OrbitElement jordan_representative(const JordanType& jt, AlgebraKind alg,
                                   const std::vector<Complex>& scales) {
  if (jt.size() != alg.n) {
    std::ostringstream os;
    os << "Jordan type (" << jt.str() << ") is a partition of " << jt.size() << ", not " << alg.n;
    throw InputError(os.str());
  }
  if (!jt.valid_for(alg.family))
    throw InputError("Jordan type (" + jt.str() + ") violates the parity rule for " +
                     to_string(alg.family));
  OrbitElement out{CMatrix(), alg, alg.representative_form()};
  switch (alg.family) {
    case Family::SL: out.matrix = sl_representative(jt, scales); break;
    case Family::SO: out.matrix = so_representative(jt, scales); break;
    case Family::SP: out.matrix = sp_representative(jt, scales); break;
  }
  return out;
}

CMatrix build_Q(int n) {
  if (n < 1) throw InputError("build_Q: n must be positive");
  const int m = n / 2;
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex i1(0.0, 1.0);
  CMatrix q = CMatrix::Zero(n, n);
  for (int t = 0; t < m; ++t) {
    q(t, t) = r;
    q(t, n - m + t) = -i1 * r;
    q(n - m + t, m - 1 - t) = r;
    q(n - m + t, n - 1 - t) = i1 * r;
  }
  if (n % 2) q(m, m) = 1.0;
  return q;
}

OrbitElement to_standard_form(const OrbitElement& elem, const Tolerances& tol) {
  if (elem.algebra.family != Family::SO || elem.form.kind() != FormKind::AntiDiagonal) return elem;
  const auto rep = validate(elem, tol);
  if (!rep.ok()) throw MembershipError("to_standard_form: " + rep.describe());
  const CMatrix q = build_Q(elem.algebra.n);
  CMatrix x = q.adjoint() * elem.matrix * q;
  return OrbitElement{std::move(x), elem.algebra, BilinearForm::identity(elem.algebra.n)};
}

// ---------------------------------------------------------------------------
// Canonical fibres

Complex CanonicalFiberParams::zeta() const {
  if (!w) return {0.0, 0.0};
  Complex z{0.0, 0.0};
  for (int i = 0; i < 3; ++i) z += v[i] * (*w)[i];
  return z;
}

double CanonicalFiberParams::v_norm2() const {
  return std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]);
}

double CanonicalFiberParams::w_norm2() const {
  return w ? std::norm((*w)[0]) + std::norm((*w)[1]) + std::norm((*w)[2]) : 0.0;
}

namespace {

CMatrix fiber_322(const CanonicalFiberParams& p) {
  CMatrix y = CMatrix::Zero(7, 7);
  y(0, 3) = p.a;
  y(0, 4) = p.b;
  y(1, 4) = p.v[0];
  y(2, 5) = -p.v[0];
  y(2, 6) = -p.b;
  y(3, 6) = -p.a;
  return y;
}

CMatrix fiber_324(const CanonicalFiberParams& p) {
  const auto& v = p.v;
  const auto& w = *p.w;
  CMatrix y = CMatrix::Zero(11, 11);
  y(0, 5) = p.a;
  y(0, 6) = p.b;
  y(1, 6) = v[0];
  y(1, 7) = -w[1];
  y(1, 8) = w[2];
  y(2, 6) = v[1];
  y(2, 7) = w[0];
  y(2, 9) = -w[2];
  y(3, 6) = v[2];
  y(3, 8) = -w[0];
  y(3, 9) = w[1];
  y(4, 7) = -v[2];
  y(4, 8) = -v[1];
  y(4, 9) = -v[0];
  y(4, 10) = -p.b;
  y(5, 10) = -p.a;
  return y;
}

// Isometric embedding (C^base, S) -> (C^n, S) for odd base: the outer
// halves keep their coordinates, the middle vector goes to the middle of
// C^n, or to (e_c + e_{c+1})/sqrt2 when n is even.
CMatrix antidiagonal_embedding(int base, int n) {
  const int m0 = base / 2;
  const int pad = n - base;
  CMatrix p = CMatrix::Zero(n, base);
  for (int i = 0; i < m0; ++i) {
    p(i, i) = 1.0;
    p(base - 1 - i + pad, base - 1 - i) = 1.0;
  }
  if (n % 2) {
    p(n / 2, m0) = 1.0;
  } else {
    const double r = 1.0 / std::numbers::sqrt2;
    p(n / 2 - 1, m0) = r;
    p(n / 2, m0) = r;
  }
  return p;
}

}  // namespace

OrbitElement canonical_fiber(const CanonicalFiberParams& params, FiberVariant variant, int padding) {
  if (padding < 0) throw InputError("canonical_fiber: padding must be non-negative");
  CMatrix y;
  if (variant == FiberVariant::F322) {
    if (params.w) throw InputError("canonical_fiber: the (3,2^2) fibre takes no w");
    if (params.v[1] != Complex(0.0) || params.v[2] != Complex(0.0))
      throw InputError("canonical_fiber: the (3,2^2) fibre takes a scalar v");
    y = fiber_322(params);
  } else {
    if (!params.w) throw InputError("canonical_fiber: the (3,2^4) fibre needs w");
    y = fiber_324(params);
  }
  const int base = static_cast<int>(y.rows());
  const int n = base + padding;
  if (padding > 0) {
    const CMatrix p = antidiagonal_embedding(base, n);
    const CMatrix pinv = BilinearForm::anti_diagonal(base).matrix() * p.transpose() *
                         BilinearForm::anti_diagonal(n).matrix();
    y = p * y * pinv;
  }
  return OrbitElement{std::move(y), AlgebraKind::make(Family::SO, n), BilinearForm::anti_diagonal(n)};
}

// ---------------------------------------------------------------------------
// Haar sampling

CMatrix haar_unitary(int n, Rng& rng) {
  const CMatrix z = rng.complex_gaussian(n, n);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  const Complex det = q.determinant();
  if (n > 0) q.col(0) *= std::conj(det) / std::abs(det);
  return q;
}

CMatrix haar_orthogonal(int n, Rng& rng) {
  const RMatrix z = rng.real_gaussian(n, n);
  Eigen::HouseholderQR<RMatrix> qr(z);
  RMatrix q = qr.householderQ();
  for (int j = 0; j < n; ++j)
    if (qr.matrixQR()(j, j) < 0) q.col(j) *= -1.0;
  if (n > 0 && q.determinant() < 0) q.col(0) *= -1.0;
  return q.cast<Complex>();
}

CMatrix haar_compact_symplectic(int n, Rng& rng) {
  if (n % 2 != 0) throw InputError("haar_compact_symplectic: n must be even");
  const int m = n / 2;
  const CMatrix j = BilinearForm::standard_symplectic(n).matrix();
  CMatrix g = CMatrix::Zero(n, n);
  // Gram-Schmidt over the quaternionic pairs (u, -J conj(u)).
  for (int c = 0; c < m; ++c) {
    CVector u = rng.complex_gaussian(n, 1);
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < c; ++k) {
        u -= g.col(k) * g.col(k).dot(u);
        u -= g.col(m + k) * g.col(m + k).dot(u);
      }
    }
    u.normalize();
    g.col(c) = u;
    g.col(m + c) = -j * u.conjugate();
  }
  return g;
}

OrbitElement random_compact_conjugate(const OrbitElement& elem, std::uint64_t seed) {
  Rng rng(seed);
  const int n = elem.algebra.n;
  CMatrix g;
  switch (elem.algebra.family) {
    case Family::SL: g = haar_unitary(n, rng); break;
    case Family::SO:
      if (elem.form.kind() != FormKind::Identity)
        throw InputError("random_compact_conjugate: so elements must use the identity form");
      g = haar_orthogonal(n, rng);
      break;
    case Family::SP:
      if (elem.form.kind() != FormKind::StandardSymplectic)
        throw InputError("random_compact_conjugate: sp elements must use the standard symplectic form");
      g = haar_compact_symplectic(n, rng);
      break;
  }
  return OrbitElement{g * elem.matrix * g.adjoint(), elem.algebra, elem.form};
}

OrbitElement random_orbit_element(const JordanType& jt, AlgebraKind alg, Rng& rng) {
  std::vector<Complex> scales(jt.parts.size());
  for (auto& s : scales) s = std::polar(rng.uniform(0.5, 2.0), rng.uniform(0.0, 2.0 * std::numbers::pi));
  OrbitElement rep = to_standard_form(jordan_representative(jt, alg, scales));

  const int n = alg.n;
  const double amp = 0.5 / std::sqrt(static_cast<double>(n));
  CMatrix z = rng.complex_gaussian(n, n) * amp;
  switch (alg.family) {
    case Family::SL: break;
    case Family::SO: z = (z - z.transpose()).eval() / std::numbers::sqrt2; break;
    case Family::SP:
      z = (rep.form.matrix() * (z + z.transpose()) / std::numbers::sqrt2).eval();
      break;
  }
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix g = (id - z).partialPivLu().solve(id + z);
  const CMatrix ginv = (id + z).partialPivLu().solve(id - z);
  rep.matrix = g * rep.matrix * ginv;
  return random_compact_conjugate(rep, static_cast<std::uint64_t>(rng.uniform_int(0, 1 << 30)));
}

// ---------------------------------------------------------------------------
// classification

std::string to_string(Method m) {
  switch (m) {
    case Method::Length2: return "length2";
    case Method::Minimal: return "minimal";
    case Method::Coh2: return "coh2";
    case Method::Lift32k: return "lift32k";
    case Method::Closed322: return "closed322";
    case Method::Cubic324: return "cubic324";
    case Method::Sl3Regular: return "sl3_regular";
    case Method::Oracle: return "oracle";
  }
  return "?";
}

Classification classify(const JordanType& jt, AlgebraKind alg) {
  if (jt.size() != alg.n) throw InputError("classify: partition size does not match the algebra");
  if (!jt.valid_for(alg.family))
    throw InputError("classify: Jordan type (" + jt.str() + ") is invalid for " + to_string(alg.family));
  Classification c;
  const int k = jt.longest();
  const int n = alg.n;
  const int ones = jt.count(1);
  const int twos = jt.count(2);
  const int threes = jt.count(3);
  c.diagram_length = k;
  c.is_zero = k <= 1;

  switch (alg.family) {
    case Family::SL:
    case Family::SP:
      c.is_minimal = k == 2 && twos == 1 && ones == n - 2;
      c.is_coh2 = k == 2 && twos == 2 && ones == n - 4;
      break;
    case Family::SO:
      c.is_minimal = k == 2 && twos == 2 && ones == n - 4;
      c.is_coh2 = (k == 3 && threes == 1 && ones == n - 3) || (k == 2 && twos == 4 && ones == n - 8);
      break;
  }

  auto add = [&](Method m) { c.methods.push_back(m); };
  const bool so = alg.family == Family::SO;
  const bool single_three = so && k == 3 && threes == 1;
  if (c.is_zero || k == 2) {
    add(Method::Length2);
    if (c.is_zero || c.is_minimal) add(Method::Minimal);
    if (c.is_zero || c.is_coh2) add(Method::Coh2);
    if (so) add(Method::Lift32k);
  }
  if (single_three) {
    add(Method::Lift32k);
    if (c.is_coh2) add(Method::Coh2);
    if (twos == 2) add(Method::Closed322);
    if (twos == 4) add(Method::Cubic324);
  }
  if (alg.family == Family::SL && n == 3) add(Method::Sl3Regular);
  if (k <= 3) add(Method::Oracle);
  return c;
}

}  // namespace hkpot
