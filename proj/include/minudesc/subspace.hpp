#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "minudesc/gabor.hpp"

namespace minudesc {

// Class-labeled raw jets; one class per physical minutia across impressions.
struct LabeledJetSet {
  std::vector<RawJet> jets;
  std::vector<int> labels;
};

struct PcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd basis;        // input_dim x out_dim, orthonormal columns
  Eigen::VectorXd eigenvalues;  // descending
};

// Centering mean + composite projection (PCA then LDA).
struct SubspaceTransform {
  Eigen::VectorXd mean;    // input_dim
  Eigen::MatrixXd matrix;  // input_dim x out_dim
  int input_dim = 0;
  int pca_dim = 0;
  int out_dim = 0;
};

PcaModel fit_pca(const std::vector<RawJet>& jets, int out_dim);
PcaModel fit_pca(const Eigen::MatrixXd& samples, int out_dim);  // rows = samples

// Columns solve S_b v = lambda S_w v for the top out_dim eigenvalues, with
// S_w regularized as S_w + 1e-4*(trace(S_w)/dim)*I.
Eigen::MatrixXd fit_lda(const Eigen::MatrixXd& samples, const std::vector<int>& labels,
                        int out_dim);

SubspaceTransform compose(const PcaModel& pca, const Eigen::MatrixXd& lda);

std::vector<double> project(const RawJet& jet, const SubspaceTransform& t);

// fit_pca -> fit_lda -> compose on L2-normalized jets. Deterministic: the
// eigenvector sign is canonicalized (largest-magnitude entry positive).
SubspaceTransform train(const LabeledJetSet& data, int pca_dim = 30, int lda_dim = 25);

// Binary format: magic "MDSC", version u16, dims u16 x3, mean f64s,
// matrix row-major f64s, all little-endian.
void save_transform(const std::string& path, const SubspaceTransform& t);
SubspaceTransform load_transform(const std::string& path);

}  // namespace minudesc
