#pragma once

#include <memory>
#include <vector>

#include "akg/patch.hpp"
#include "akg/residual.hpp"

namespace akg {

/// Metric and almost complex structure in frame components. Column j of J
/// holds J e_j. The Kahler form is omega(X, Y) = g(JX, Y), i.e. the matrix
/// J^T g.
template <class S>
struct AKStructure {
  std::shared_ptr<const FramedPatch<S>> patch;
  Mat<S> g;
  Mat<S> g_inv;
  Mat<S> J;

  int dim() const { return static_cast<int>(g.rows()); }
  int n() const { return dim() / 2; }
  Mat<S> omega() const { return J.transpose() * g; }
};

/// Builds a structure, inverting g exactly.
template <class S>
AKStructure<S> make_structure(std::shared_ptr<const FramedPatch<S>> patch, Mat<S> g, Mat<S> J);

/// x^T m y.
template <class S>
S bilinear(const Vec<S>& x, const Mat<S>& m, const Vec<S>& y);

/// Christoffel-type table: gamma[i](k, j) is the coefficient of e_k in
/// the derivative of e_j along e_i.
template <class S>
struct Connection {
  std::vector<Mat<S>> gamma;
};

/// n x n matrix of complex 1-forms, each stored as real and imaginary parts
/// (values on the frame). Entry (i, j) lives at index i * n + j.
template <class S>
struct ComplexOneForms {
  int n = 0;
  std::vector<Vec<S>> re;
  std::vector<Vec<S>> im;
  const Vec<S>& real(int i, int j) const { return re[i * n + j]; }
  const Vec<S>& imag(int i, int j) const { return im[i * n + j]; }
};

template <class S>
Vec<S> nijenhuis(const AKStructure<S>& s, const Vec<S>& x, const Vec<S>& y);

template <class S>
Connection<S> levi_civita(const AKStructure<S>& s);

template <class S>
Vec<S> covariant(const FramedPatch<S>& p, const Connection<S>& t, const Vec<S>& x, const Vec<S>& y);

/// Covariant derivative of an endomorphism field along X.
template <class S>
Mat<S> covariant_endo(const FramedPatch<S>& p, const Connection<S>& t, const Vec<S>& x, const Mat<S>& a);

/// D = nabla + 1/2 (nabla J) J.
template <class S>
Connection<S> chern_connection(const AKStructure<S>& s, const Connection<S>& lc);

template <class S>
Vec<S> torsion(const FramedPatch<S>& p, const Connection<S>& t, int i, int j);

/// R(e_i, e_j) as an endomorphism matrix.
template <class S>
Mat<S> curvature(const FramedPatch<S>& p, const Connection<S>& t, int i, int j);

/// A_ij(e_k) = hermitian product of D_{e_k} f_j with f_i, where f_j is column
/// j of `frame`: real part g(D f_j, f_i), imaginary part -omega(D f_j, f_i).
template <class S>
ComplexOneForms<S> connection_one_form(const AKStructure<S>& s, const Connection<S>& t, const Mat<S>& frame);

/// Sum of the imaginary parts of the diagonal.
template <class S>
Vec<S> im_trace(const ComplexOneForms<S>& a);

/// -1/2 sum over all 2n fields of omega(D f_i, f_i); equal to im_trace for a
/// unitary frame of a J-parallel connection.
template <class S>
Vec<S> im_trace_direct(const AKStructure<S>& s, const Connection<S>& t, const Mat<S>& frame);

/// -d of the given 1-form.
template <class S>
Mat<S> chern_ricci(const FramedPatch<S>& p, const Vec<S>& im_trace);

/// i Tr_C R split into the Chern-Ricci form (rho) and the real part of
/// Tr_C R (imag_residual), which must vanish.
template <class S>
struct CurvatureTrace {
  Mat<S> rho;
  Mat<S> real_trace;
};

template <class S>
CurvatureTrace<S> chern_ricci_from_curvature(const AKStructure<S>& s, const Connection<S>& t, const Mat<S>& frame);

/// Leading principal minors of g.
template <class S>
std::vector<S> leading_minors(const Mat<S>& g);

/// Gram-Schmidt adaptation: f_1 = e_1 / |e_1|, f_{n+1} = J f_1, and so on.
template <class S>
Mat<S> adapt_frame(const AKStructure<S>& s);

// Residual producers. Each appends one entry per component.
template <class S>
void check_patch(const FramedPatch<S>& p, Residuals<S>& out);
template <class S>
void check_structure(const AKStructure<S>& s, const Connection<S>& lc, Residuals<S>& out);
template <class S>
void check_chern(const AKStructure<S>& s, const Connection<S>& lc, const Connection<S>& d, Residuals<S>& out);
template <class S>
void check_adapted(const AKStructure<S>& s, const Mat<S>& frame, Residuals<S>& out);

/// Everything derived from the Chern connection in one adapted frame.
template <class S>
struct ChernRicciData {
  Connection<S> lc;
  Connection<S> chern;
  ComplexOneForms<S> a;
  Vec<S> im_trace;
  Vec<S> im_trace_direct;
  Mat<S> rho;
  CurvatureTrace<S> from_curvature;
};

template <class S>
ChernRicciData<S> chern_ricci_data(const AKStructure<S>& s, const Mat<S>& frame);

/// Skew-hermitian A, both trace routes, both Ricci routes, d rho = 0.
template <class S>
void check_chern_ricci(const AKStructure<S>& s, const ChernRicciData<S>& data, Residuals<S>& out,
                       const std::string& suffix = "");

}  // namespace akg
