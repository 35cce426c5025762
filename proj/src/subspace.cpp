#include "minudesc/subspace.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cstring>
#include <fstream>
#include <map>

namespace minudesc {

namespace {

// Deterministic eigenvector sign: largest-magnitude entry made positive.
void canonicalize_columns(Eigen::MatrixXd& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      double a = std::fabs(m(r, c));
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
    if (m(best, c) < 0) m.col(c) = -m.col(c);
  }
}

Eigen::MatrixXd jets_to_matrix(const std::vector<RawJet>& jets) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(jets.size()), 360);
  for (size_t i = 0; i < jets.size(); ++i)
    for (int j = 0; j < 360; ++j) m(static_cast<Eigen::Index>(i), j) = jets[i].values[j];
  return m;
}

}  // namespace

PcaModel fit_pca(const Eigen::MatrixXd& samples, int out_dim) {
  const Eigen::Index n = samples.rows(), d = samples.cols();
  if (out_dim <= 0 || out_dim > d)
    throw Error(Errc::invalid_parameter, "fit_pca: out_dim out of range");
  if (n <= out_dim)
    throw Error(Errc::insufficient_samples, "fit_pca: need more samples than out_dim");
  PcaModel model;
  model.mean = samples.colwise().mean();
  Eigen::MatrixXd centered = samples.rowwise() - model.mean.transpose();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / double(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success)
    throw Error(Errc::degenerate_scatter, "fit_pca: eigendecomposition failed");
  model.basis.resize(d, out_dim);
  model.eigenvalues.resize(out_dim);
  for (int i = 0; i < out_dim; ++i) {
    // Eigen sorts ascending; take from the top.
    model.basis.col(i) = solver.eigenvectors().col(d - 1 - i);
    model.eigenvalues[i] = std::max(0.0, solver.eigenvalues()[d - 1 - i]);
  }
  canonicalize_columns(model.basis);
  return model;
}

PcaModel fit_pca(const std::vector<RawJet>& jets, int out_dim) {
  return fit_pca(jets_to_matrix(jets), out_dim);
}

Eigen::MatrixXd fit_lda(const Eigen::MatrixXd& samples, const std::vector<int>& labels,
                        int out_dim) {
  const Eigen::Index n = samples.rows(), d = samples.cols();
  if (static_cast<Eigen::Index>(labels.size()) != n)
    throw Error(Errc::dimension_mismatch, "fit_lda: labels/samples size mismatch");
  std::map<int, std::vector<Eigen::Index>> by_class;
  for (Eigen::Index i = 0; i < n; ++i) by_class[labels[i]].push_back(i);
  const int classes = static_cast<int>(by_class.size());
  if (out_dim <= 0 || out_dim > classes - 1)
    throw Error(Errc::too_few_classes,
                "fit_lda: out_dim exceeds classes-1 (" + std::to_string(classes) + " classes)");
  for (const auto& [label, rows] : by_class)
    if (rows.size() < 2)
      throw Error(Errc::too_few_samples_per_class,
                  "fit_lda: class " + std::to_string(label) + " has fewer than 2 samples");

  const Eigen::VectorXd global_mean = samples.colwise().mean();
  Eigen::MatrixXd sw = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd sb = Eigen::MatrixXd::Zero(d, d);
  for (const auto& [label, rows] : by_class) {
    Eigen::MatrixXd cls(static_cast<Eigen::Index>(rows.size()), d);
    for (size_t r = 0; r < rows.size(); ++r) cls.row(static_cast<Eigen::Index>(r)) = samples.row(rows[r]);
    Eigen::VectorXd mean = cls.colwise().mean();
    Eigen::MatrixXd centered = cls.rowwise() - mean.transpose();
    sw += centered.transpose() * centered;
    Eigen::VectorXd diff = mean - global_mean;
    sb += double(rows.size()) * diff * diff.transpose();
  }

  const double sw_trace = sw.trace();
  const double sb_trace = sb.trace();
  if (sw_trace <= 0 && sb_trace <= 0)
    throw Error(Errc::degenerate_scatter, "fit_lda: all samples identical");
  const double ridge = 1e-4 * (sw_trace > 0 ? sw_trace : sb_trace) / double(d);
  Eigen::MatrixXd sw_reg = sw + ridge * Eigen::MatrixXd::Identity(d, d);

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(sb, sw_reg);
  if (solver.info() != Eigen::Success)
    throw Error(Errc::degenerate_scatter, "fit_lda: generalized eigensolve failed");
  Eigen::MatrixXd w(d, out_dim);
  for (int i = 0; i < out_dim; ++i) w.col(i) = solver.eigenvectors().col(d - 1 - i);
  canonicalize_columns(w);
  return w;
}

SubspaceTransform compose(const PcaModel& pca, const Eigen::MatrixXd& lda) {
  if (pca.basis.cols() != lda.rows())
    throw Error(Errc::dimension_mismatch, "compose: PCA output dim != LDA input dim");
  SubspaceTransform t;
  t.mean = pca.mean;
  t.matrix = pca.basis * lda;
  t.input_dim = static_cast<int>(pca.basis.rows());
  t.pca_dim = static_cast<int>(pca.basis.cols());
  t.out_dim = static_cast<int>(lda.cols());
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(t.matrix);
  if (qr.rank() < t.out_dim)
    throw Error(Errc::degenerate_scatter, "compose: composite transform is rank deficient");
  return t;
}

std::vector<double> project(const RawJet& jet, const SubspaceTransform& t) {
  if (t.input_dim != 360)
    throw Error(Errc::dimension_mismatch, "project: transform input dim is not 360");
  Eigen::Map<const Eigen::VectorXd> v(jet.values.data(), 360);
  Eigen::VectorXd out = t.matrix.transpose() * (v - t.mean);
  return std::vector<double>(out.data(), out.data() + out.size());
}

SubspaceTransform train(const LabeledJetSet& data, int pca_dim, int lda_dim) {
  if (data.jets.size() != data.labels.size())
    throw Error(Errc::dimension_mismatch, "train: jets/labels size mismatch");
  std::vector<RawJet> normed(data.jets.size());
  for (size_t i = 0; i < data.jets.size(); ++i) normed[i] = l2_normalized(data.jets[i]);
  PcaModel pca = fit_pca(normed, pca_dim);
  Eigen::MatrixXd samples = jets_to_matrix(normed);
  Eigen::MatrixXd centered = samples.rowwise() - pca.mean.transpose();
  Eigen::MatrixXd reduced = centered * pca.basis;  // n x pca_dim
  Eigen::MatrixXd lda = fit_lda(reduced, data.labels, lda_dim);
  return compose(pca, lda);
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "transform file i/o assumes a little-endian host");

constexpr char kMagic[4] = {'M', 'D', 'S', 'C'};
constexpr std::uint16_t kVersion = 1;

void put_u16(std::ostream& out, std::uint16_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint16_t get_u16(std::istream& in) {
  std::uint16_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

void save_transform(const std::string& path, const SubspaceTransform& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  out.write(kMagic, 4);
  put_u16(out, kVersion);
  put_u16(out, static_cast<std::uint16_t>(t.input_dim));
  put_u16(out, static_cast<std::uint16_t>(t.pca_dim));
  put_u16(out, static_cast<std::uint16_t>(t.out_dim));
  out.write(reinterpret_cast<const char*>(t.mean.data()),
            static_cast<std::streamsize>(sizeof(double) * t.input_dim));
  for (int r = 0; r < t.input_dim; ++r)
    for (int c = 0; c < t.out_dim; ++c) {
      double v = t.matrix(r, c);
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
  if (!out) throw Error(Errc::io_error, "short write to " + path);
}

SubspaceTransform load_transform(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw Error(Errc::malformed_file, path + ": bad magic");
  std::uint16_t version = get_u16(in);
  if (version != kVersion)
    throw Error(Errc::version_mismatch, path + ": unsupported version " + std::to_string(version));
  SubspaceTransform t;
  t.input_dim = get_u16(in);
  t.pca_dim = get_u16(in);
  t.out_dim = get_u16(in);
  if (!in || t.input_dim <= 0 || t.out_dim <= 0 || t.pca_dim < t.out_dim ||
      t.input_dim < t.pca_dim)
    throw Error(Errc::malformed_file, path + ": implausible dims header");
  t.mean.resize(t.input_dim);
  in.read(reinterpret_cast<char*>(t.mean.data()),
          static_cast<std::streamsize>(sizeof(double) * t.input_dim));
  t.matrix.resize(t.input_dim, t.out_dim);
  for (int r = 0; r < t.input_dim && in; ++r)
    for (int c = 0; c < t.out_dim && in; ++c) {
      double v = 0;
      in.read(reinterpret_cast<char*>(&v), sizeof v);
      t.matrix(r, c) = v;
    }
  if (!in) throw Error(Errc::malformed_file, path + ": truncated payload");
  char extra = 0;
  if (in.read(&extra, 1).gcount() != 0)
    throw Error(Errc::malformed_file, path + ": trailing bytes after payload");
  return t;
}

}  // namespace minudesc
