#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "stnn/matrix.hpp"
#include "stnn/types.hpp"

namespace stnn {

struct Dataset;

enum class Optimizer { SGD, Adam };

/// Training hyperparameters. The rank is the one model hyperparameter; the
/// rest is optimization plumbing. All randomness (init, shuffling) derives
/// from `seed`, so identical configs give identical parameter trajectories.
struct TrainConfig {
    std::size_t rank = 32;
    double learning_rate = 0.05;
    std::size_t epochs = 200;
    std::size_t batch_size = 1024;
    double init_scale = 1.0;
    Optimizer optimizer = Optimizer::Adam;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 42;
    double negative_ratio = 1.0;  // negatives per positive
};

/// Throws ConfigError on invalid values.
void validate(const TrainConfig& cfg);

/// The factorized scorer: substructure embeddings A (shared by both drug
/// sides of a triple), interaction-type embeddings C, per-rank weights
/// w_lambda and a scalar bias. Together they are the CP representation of
/// the substructure-substructure-interaction tensor.
struct FactorModel {
    std::size_t n = 0;     // substructure universe size
    std::size_t f = 0;     // interaction-type count
    std::size_t rank = 0;  // R
    Matrix A;              // n x R
    Matrix C;              // f x R
    std::vector<double> w_lambda;  // length R
    double bias = 0.0;

    friend bool operator==(const FactorModel&, const FactorModel&) = default;
};

/// Loss gradients, same shapes as the model parameters.
struct Gradients {
    Matrix dA;
    Matrix dC;
    std::vector<double> dW;
    double dbias = 0.0;
};

/// Per-epoch mean squared loss over the training triples.
struct TrainReport {
    std::vector<std::pair<std::size_t, double>> loss_history;  // (epoch, loss)
    double final_loss = 0.0;
};

/// Fresh model: A and C uniform in [-init_scale/sqrt(R), +init_scale/sqrt(R)]
/// from cfg.seed, w_lambda all 1/sqrt(R), bias 0. Deterministic given seed.
/// Throws ConfigError on zero dimensions.
FactorModel init_model(std::size_t n, std::size_t f, const TrainConfig& cfg);

/// Column sums of the A rows selected by the fingerprint (e^T A).
/// Throws IndexError on a substructure index >= n.
std::vector<double> drug_embedding(const FactorModel& model,
                                   const Fingerprint& fp);

/// Raw interaction score of a triple:
///   (emb(fp_q) (.) emb(fp_p) (.) C[k]) . w_lambda + bias
/// where (.) is the elementwise product. Unbounded (no squashing);
/// symmetric in (fp_p, fp_q) bit-exactly.
double score(const FactorModel& model, const Fingerprint& fp_p,
             const Fingerprint& fp_q, std::size_t k);

/// Sum of squared errors (label - score)^2 over the batch.
/// Throws ArgumentError on an empty batch.
double loss_batch(const FactorModel& model, std::span<const LabeledTriple> batch,
                  std::span<const Fingerprint> fingerprints);

/// Analytic gradients of loss_batch with respect to every parameter,
/// summed over the batch.
Gradients grad_batch(const FactorModel& model,
                     std::span<const LabeledTriple> batch,
                     std::span<const Fingerprint> fingerprints);

/// Mini-batch gradient descent on the squared loss. Epochs of shuffled
/// batches with the configured optimizer; fresh init from cfg. Fully
/// deterministic given cfg.seed.
/// Throws TrainingDivergedError when the loss stops being finite.
std::pair<FactorModel, TrainReport> train(const Dataset& dataset,
                                          std::span<const LabeledTriple> triples,
                                          const TrainConfig& cfg);

/// Binary checkpoint, little-endian: magic "STNN", u32 version (=1),
/// u32 n, f, R, then A row-major, C row-major, w_lambda, bias as f64.
/// No padding. Round-trips bit-exactly.
void save_model(const FactorModel& model, const std::filesystem::path& path);

/// Throws CheckpointError on bad magic/version/dimensions or truncation.
FactorModel load_model(const std::filesystem::path& path);

}  // namespace stnn
