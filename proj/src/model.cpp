#include "stnn/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>

#include "stnn/data.hpp"
#include "stnn/errors.hpp"
#include "stnn/rng.hpp"

namespace stnn {

void validate(const TrainConfig& cfg) {
    if (cfg.rank < 1) throw ConfigError("rank must be >= 1");
    if (!(cfg.learning_rate > 0)) throw ConfigError("learning rate must be > 0");
    if (cfg.batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (!(cfg.init_scale >= 0)) throw ConfigError("init scale must be >= 0");
    if (!(cfg.negative_ratio > 0)) throw ConfigError("negative ratio must be > 0");
    if (!(cfg.adam_beta1 >= 0 && cfg.adam_beta1 < 1) ||
        !(cfg.adam_beta2 >= 0 && cfg.adam_beta2 < 1)) {
        throw ConfigError("adam betas must lie in [0, 1)");
    }
    if (!(cfg.adam_epsilon > 0)) throw ConfigError("adam epsilon must be > 0");
}

FactorModel init_model(std::size_t n, std::size_t f, const TrainConfig& cfg) {
    validate(cfg);
    if (n == 0 || f == 0) {
        throw ConfigError("model dimensions must be positive, got n=" +
                          std::to_string(n) + " f=" + std::to_string(f));
    }
    FactorModel model;
    model.n = n;
    model.f = f;
    model.rank = cfg.rank;
    model.A = Matrix(n, cfg.rank);
    model.C = Matrix(f, cfg.rank);
    const double bound = cfg.init_scale / std::sqrt(static_cast<double>(cfg.rank));
    Rng rng(derive_seed(cfg.seed, RngPurpose::Init));
    for (double& v : model.A.data()) v = rng.uniform(-bound, bound);
    for (double& v : model.C.data()) v = rng.uniform(-bound, bound);
    model.w_lambda.assign(cfg.rank,
                          1.0 / std::sqrt(static_cast<double>(cfg.rank)));
    model.bias = 0.0;
    return model;
}

std::vector<double> drug_embedding(const FactorModel& model,
                                   const Fingerprint& fp) {
    std::vector<double> emb(model.rank, 0.0);
    for (std::uint32_t i : fp.bits) {
        if (i >= model.n) {
            throw IndexError("substructure index " + std::to_string(i) +
                             " out of range [0, " + std::to_string(model.n) + ")");
        }
        const auto row = model.A.row(i);
        for (std::size_t r = 0; r < model.rank; ++r) emb[r] += row[r];
    }
    return emb;
}

double score(const FactorModel& model, const Fingerprint& fp_p,
             const Fingerprint& fp_q, std::size_t k) {
    if (k >= model.f) {
        throw IndexError("type index " + std::to_string(k) + " out of range [0, " +
                         std::to_string(model.f) + ")");
    }
    const std::vector<double> u = drug_embedding(model, fp_q);
    const std::vector<double> v = drug_embedding(model, fp_p);
    const auto c = model.C.row(k);
    double sum = 0.0;
    // (u[r] * v[r]) commutes bit-exactly, keeping score(p,q,k) == score(q,p,k).
    for (std::size_t r = 0; r < model.rank; ++r) {
        sum += model.w_lambda[r] * (u[r] * v[r]) * c[r];
    }
    return sum + model.bias;
}

namespace {

/// Accumulate one triple's gradient contributions; returns its squared error.
double accumulate_triple(const FactorModel& model, const LabeledTriple& t,
                         std::span<const Fingerprint> fps, Gradients& grads) {
    const Fingerprint& fp_p = fps[t.p];
    const Fingerprint& fp_q = fps[t.q];
    const std::vector<double> u = drug_embedding(model, fp_q);
    const std::vector<double> v = drug_embedding(model, fp_p);
    if (t.k >= model.f) {
        throw IndexError("type index " + std::to_string(t.k) +
                         " out of range [0, " + std::to_string(model.f) + ")");
    }
    const auto c = model.C.row(t.k);
    const std::size_t rank = model.rank;

    double s = 0.0;
    for (std::size_t r = 0; r < rank; ++r) {
        s += model.w_lambda[r] * (u[r] * v[r]) * c[r];
    }
    s += model.bias;

    const double g = 2.0 * (s - static_cast<double>(t.label));

    auto dck = grads.dC.row(t.k);
    for (std::size_t r = 0; r < rank; ++r) {
        grads.dW[r] += g * (u[r] * v[r] * c[r]);
        dck[r] += g * (model.w_lambda[r] * u[r] * v[r]);
    }
    grads.dbias += g;
    // A receives contributions from both sides (A doubles as B).
    for (std::uint32_t j : fp_q.bits) {
        auto daj = grads.dA.row(j);
        for (std::size_t r = 0; r < rank; ++r) {
            daj[r] += g * (model.w_lambda[r] * v[r] * c[r]);
        }
    }
    for (std::uint32_t i : fp_p.bits) {
        auto dai = grads.dA.row(i);
        for (std::size_t r = 0; r < rank; ++r) {
            dai[r] += g * (model.w_lambda[r] * u[r] * c[r]);
        }
    }

    const double err = static_cast<double>(t.label) - s;
    return err * err;
}

void check_batch(std::span<const LabeledTriple> batch,
                 std::span<const Fingerprint> fps) {
    if (batch.empty()) throw ArgumentError("batch must be nonempty");
    for (const LabeledTriple& t : batch) {
        if (t.p >= fps.size() || t.q >= fps.size()) {
            throw IndexError("drug index out of range of the fingerprint table");
        }
        if (t.label > 1) throw ArgumentError("labels must be 0 or 1");
    }
}

}  // namespace

double loss_batch(const FactorModel& model, std::span<const LabeledTriple> batch,
                  std::span<const Fingerprint> fingerprints) {
    check_batch(batch, fingerprints);
    double total = 0.0;
    for (const LabeledTriple& t : batch) {
        const double s = score(model, fingerprints[t.p], fingerprints[t.q], t.k);
        const double err = static_cast<double>(t.label) - s;
        total += err * err;
    }
    return total;
}

Gradients grad_batch(const FactorModel& model,
                     std::span<const LabeledTriple> batch,
                     std::span<const Fingerprint> fingerprints) {
    check_batch(batch, fingerprints);
    Gradients grads;
    grads.dA = Matrix(model.n, model.rank);
    grads.dC = Matrix(model.f, model.rank);
    grads.dW.assign(model.rank, 0.0);
    grads.dbias = 0.0;
    for (const LabeledTriple& t : batch) {
        accumulate_triple(model, t, fingerprints, grads);
    }
    return grads;
}

namespace {

/// Adam first/second-moment state for one parameter block.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;

    explicit AdamState(std::size_t size) : m(size, 0.0), v(size, 0.0) {}
};

void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state, const TrainConfig& cfg, double bias_corr1,
               double bias_corr2) {
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = cfg.adam_beta1 * state.m[i] + (1.0 - cfg.adam_beta1) * g;
        state.v[i] = cfg.adam_beta2 * state.v[i] + (1.0 - cfg.adam_beta2) * g * g;
        const double m_hat = state.m[i] / bias_corr1;
        const double v_hat = state.v[i] / bias_corr2;
        params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_epsilon);
    }
}

void sgd_step(std::span<double> params, std::span<const double> grads,
              double learning_rate) {
    for (std::size_t i = 0; i < params.size(); ++i) {
        params[i] -= learning_rate * grads[i];
    }
}

bool model_finite(const FactorModel& m) {
    if (!m.A.all_finite() || !m.C.all_finite()) return false;
    for (double v : m.w_lambda) {
        if (!std::isfinite(v)) return false;
    }
    return std::isfinite(m.bias);
}

}  // namespace

std::pair<FactorModel, TrainReport> train(const Dataset& dataset,
                                          std::span<const LabeledTriple> triples,
                                          const TrainConfig& cfg) {
    validate(cfg);
    if (triples.empty()) throw ArgumentError("training set must be nonempty");
    check_batch(triples, dataset.fingerprints);
    for (const LabeledTriple& t : triples) {
        if (t.k >= dataset.f) {
            throw IndexError("type index " + std::to_string(t.k) +
                             " out of range [0, " + std::to_string(dataset.f) + ")");
        }
    }

    FactorModel model = init_model(dataset.n, dataset.f, cfg);
    TrainReport report;

    const std::size_t count = triples.size();
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffler(derive_seed(cfg.seed, RngPurpose::Shuffle));

    AdamState adam_a(model.A.data().size());
    AdamState adam_c(model.C.data().size());
    AdamState adam_w(model.rank);
    AdamState adam_b(1);
    std::size_t step = 0;

    Gradients grads;
    grads.dA = Matrix(model.n, model.rank);
    grads.dC = Matrix(model.f, model.rank);
    grads.dW.assign(model.rank, 0.0);

    std::vector<LabeledTriple> batch;
    batch.reserve(std::min(cfg.batch_size, count));

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        shuffler.shuffle(order);
        double epoch_loss = 0.0;

        for (std::size_t start = 0; start < count; start += cfg.batch_size) {
            const std::size_t stop = std::min(start + cfg.batch_size, count);
            batch.clear();
            for (std::size_t i = start; i < stop; ++i) {
                batch.push_back(triples[order[i]]);
            }

            std::fill(grads.dA.data().begin(), grads.dA.data().end(), 0.0);
            std::fill(grads.dC.data().begin(), grads.dC.data().end(), 0.0);
            std::fill(grads.dW.begin(), grads.dW.end(), 0.0);
            grads.dbias = 0.0;

            double batch_loss = 0.0;
            for (const LabeledTriple& t : batch) {
                batch_loss +=
                    accumulate_triple(model, t, dataset.fingerprints, grads);
            }
            if (!std::isfinite(batch_loss)) {
                throw TrainingDivergedError(epoch, cfg.learning_rate);
            }
            epoch_loss += batch_loss;

            if (cfg.optimizer == Optimizer::Adam) {
                ++step;
                const double corr1 =
                    1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step));
                const double corr2 =
                    1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step));
                adam_step(model.A.data(), grads.dA.data(), adam_a, cfg, corr1, corr2);
                adam_step(model.C.data(), grads.dC.data(), adam_c, cfg, corr1, corr2);
                adam_step(model.w_lambda, grads.dW, adam_w, cfg, corr1, corr2);
                std::span<double> bias_span(&model.bias, 1);
                std::span<const double> dbias_span(&grads.dbias, 1);
                adam_step(bias_span, dbias_span, adam_b, cfg, corr1, corr2);
            } else {
                sgd_step(model.A.data(), grads.dA.data(), cfg.learning_rate);
                sgd_step(model.C.data(), grads.dC.data(), cfg.learning_rate);
                sgd_step(model.w_lambda, grads.dW, cfg.learning_rate);
                model.bias -= cfg.learning_rate * grads.dbias;
            }
        }

        const double mean_loss = epoch_loss / static_cast<double>(count);
        if (!std::isfinite(mean_loss) || !model_finite(model)) {
            throw TrainingDivergedError(epoch, cfg.learning_rate);
        }
        report.loss_history.emplace_back(epoch, mean_loss);
    }

    report.final_loss = report.loss_history.empty()
                            ? std::numeric_limits<double>::quiet_NaN()
                            : report.loss_history.back().second;
    return {std::move(model), std::move(report)};
}

namespace {

constexpr char kMagic[4] = {'S', 'T', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

void put_f64(std::string& out, double v) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
    }
}

class ByteReader {
 public:
    ByteReader(const std::string& data, const std::string& path)
        : data_(data), path_(path) {}

    std::uint32_t u32() {
        require(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(
                     static_cast<unsigned char>(data_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 4;
        return v;
    }

    double f64() {
        require(8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) {
            bits |= static_cast<std::uint64_t>(
                        static_cast<unsigned char>(data_[pos_ + i]))
                    << (8 * i);
        }
        pos_ += 8;
        return std::bit_cast<double>(bits);
    }

    void raw(char* dst, std::size_t count) {
        require(count);
        std::memcpy(dst, data_.data() + pos_, count);
        pos_ += count;
    }

    std::size_t remaining() const { return data_.size() - pos_; }

 private:
    void require(std::size_t count) {
        if (data_.size() - pos_ < count) {
            throw CheckpointError(path_ + ": truncated checkpoint");
        }
    }

    const std::string& data_;
    std::string path_;
    std::size_t pos_ = 0;
};

}  // namespace

void save_model(const FactorModel& model, const std::filesystem::path& path) {
    std::string buf;
    buf.reserve(20 + 8 * (model.A.data().size() + model.C.data().size() +
                          model.rank + 1));
    buf.append(kMagic, 4);
    put_u32(buf, kVersion);
    put_u32(buf, static_cast<std::uint32_t>(model.n));
    put_u32(buf, static_cast<std::uint32_t>(model.f));
    put_u32(buf, static_cast<std::uint32_t>(model.rank));
    for (double v : model.A.data()) put_f64(buf, v);
    for (double v : model.C.data()) put_f64(buf, v);
    for (double v : model.w_lambda) put_f64(buf, v);
    put_f64(buf, model.bias);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw CheckpointError("cannot open " + path.string() + " for writing");
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw CheckpointError("failed writing " + path.string());
}

FactorModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());

    ByteReader reader(data, path.string());
    char magic[4];
    reader.raw(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw CheckpointError(path.string() + ": bad magic bytes");
    }
    const std::uint32_t version = reader.u32();
    if (version != kVersion) {
        throw CheckpointError(path.string() + ": unsupported format version " +
                              std::to_string(version));
    }
    const std::uint32_t n = reader.u32();
    const std::uint32_t f = reader.u32();
    const std::uint32_t rank = reader.u32();
    if (n == 0 || f == 0 || rank == 0) {
        throw CheckpointError(path.string() + ": zero dimension in header");
    }
    const std::size_t expected =
        8 * (static_cast<std::size_t>(n) * rank +
             static_cast<std::size_t>(f) * rank + rank + 1);
    if (reader.remaining() != expected) {
        throw CheckpointError(path.string() + ": payload size " +
                              std::to_string(reader.remaining()) +
                              " does not match header (expected " +
                              std::to_string(expected) + " bytes)");
    }

    FactorModel model;
    model.n = n;
    model.f = f;
    model.rank = rank;
    model.A = Matrix(n, rank);
    model.C = Matrix(f, rank);
    model.w_lambda.resize(rank);
    for (double& v : model.A.data()) v = reader.f64();
    for (double& v : model.C.data()) v = reader.f64();
    for (double& v : model.w_lambda) v = reader.f64();
    model.bias = reader.f64();
    if (!model_finite(model)) {
        throw CheckpointError(path.string() + ": non-finite parameter values");
    }
    return model;
}

}  // namespace stnn
