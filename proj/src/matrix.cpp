#include "takagi/matrix.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace takagi {

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace

NotSymmetric::NotSymmetric(double defect)
    : Error("matrix is not symmetric (relative defect " + fmt_double(defect) + ")"),
      defect_(defect) {}

DegenerateInput::DegenerateInput(DegeneracyKind kind, int pair, double gap)
    : Error(kind == DegeneracyKind::Coalescent
                ? "coalescent singular values at pair " + std::to_string(pair) +
                      " (relative gap " + fmt_double(gap) + ")"
                : "rank deficient (relative sigma_n " + fmt_double(gap) + ")"),
      kind_(kind),
      pair_(pair),
      gap_(gap) {}

StepFloor::StepFloor(double t, double h)
    : Error("step size " + fmt_double(h) + " below floor at t = " + fmt_double(t)),
      t_(t),
      h_(h) {}

NotUnitary::NotUnitary(double defect)
    : Error("matrix is not unitary (defect " + fmt_double(defect) + ")") {}

ParseError::ParseError(int line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

double symmetry_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
  return (a - a.transpose()).norm() / scale;
}

CSym::CSym(const CMatrix& a, double symTol) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw DimensionMismatch("CSym requires a nonempty square matrix");
  const double defect = symmetry_defect(a);
  if (defect > symTol) throw NotSymmetric(defect);
  a_ = 0.5 * (a + a.transpose());
}

CSym CSym::from_parts(const RMatrix& re, const RMatrix& im, double symTol) {
  if (re.rows() != im.rows() || re.cols() != im.cols())
    throw DimensionMismatch("real and imaginary parts differ in shape");
  CMatrix a(re.rows(), re.cols());
  a.real() = re;
  a.imag() = im;
  return CSym(a, symTol);
}

CSym CSym::operator+(const CSym& o) const {
  if (o.n() != n()) throw DimensionMismatch("CSym sum of different sizes");
  return CSym(CMatrix(a_ + o.a_), Trusted{});
}

CSym CSym::operator-(const CSym& o) const {
  if (o.n() != n()) throw DimensionMismatch("CSym difference of different sizes");
  return CSym(CMatrix(a_ - o.a_), Trusted{});
}

CSym CSym::operator*(double s) const { return CSym(CMatrix(a_ * s), Trusted{}); }

}  // namespace takagi
