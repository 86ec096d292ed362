#pragma once

#include "prcf/dataset.hpp"

#include <iosfwd>
#include <optional>

namespace prcf {

enum class Activation { Identity, Rectifier, Sigmoid };
enum class Optimizer { Sgd, Adam };
enum class TrainingPopulation { AllRows, MajorityOnly };

const char* to_string(Activation a);
const char* to_string(Optimizer o);
const char* to_string(TrainingPopulation p);
Activation activation_from_string(const std::string& s);
Optimizer optimizer_from_string(const std::string& s);
TrainingPopulation population_from_string(const std::string& s);

struct AEConfig {
    // Encoder widths from input to bottleneck, strictly decreasing. Empty
    // resolves at init to [D, ceil(D/2), ceil(D/4)] for input width D. The
    // decoder mirrors the encoder.
    std::vector<std::size_t> layer_widths;
    // One activation per weight layer (encoder then decoder; a network with
    // L widths has 2*(L-1) layers). Empty resolves to rectifier everywhere
    // except an identity output layer.
    std::vector<Activation> activations;
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    Optimizer optimizer = Optimizer::Adam;
    std::uint64_t seed = 0;
    double filter_quantile = 0.95;       // in (0, 1)
    TrainingPopulation training_population = TrainingPopulation::MajorityOnly;
};

struct DenseLayer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weights;   // out x in, row-major
    std::vector<double> bias;      // out
    Activation activation = Activation::Identity;
};

// Gradient buffers shaped exactly like the layers they correspond to.
struct LayerGrad {
    std::vector<double> weights;
    std::vector<double> bias;
};

struct AutoencoderModel {
    AEConfig config;                       // with widths/activations resolved
    std::vector<DenseLayer> layers;        // encoder stack then decoder stack
    std::optional<MinMaxTable> normalization; // captured at training time
    double threshold = -1.0;               // reconstruction-error cutoff, < 0 until fitted
    bool trained = false;

    std::size_t input_width() const { return layers.empty() ? 0 : layers.front().in; }
    std::size_t latent_width() const { return layers.empty() ? 0 : layers[layers.size() / 2 - 1].out; }
};

struct AETrainReport {
    std::vector<double> epoch_loss;        // mean per-row loss per epoch, pre-update order
    double threshold = -1.0;               // filled once fit_threshold runs
    std::vector<std::size_t> flagged_rows; // filled once filter_dataset runs
};

struct FilterResult {
    Dataset kept;                          // surviving rows in original order
    std::vector<std::size_t> flagged_rows; // indices into the filtered dataset's input
};

// Symmetric encoder/decoder with zero biases and weights drawn uniformly
// from [-s, s], s = sqrt(6 / (fan_in + fan_out)). Layer l draws from a
// generator seeded with derive_seed(config.seed, l).
AutoencoderModel ae_init(const AEConfig& config, std::size_t input_width);

// Forward pass on an already normalized input row.
struct AEForward {
    std::vector<double> latent;
    std::vector<double> reconstruction;
};
AEForward ae_forward(const AutoencoderModel& m, std::span<const double> x);

// Mean reconstruction loss over the rows of a normalized matrix: per row the
// mean squared coordinate error, averaged over rows.
double ae_mean_loss(const AutoencoderModel& m, const Matrix& rows);

// Same loss plus its gradient with respect to every weight and bias,
// averaged over the batch. grads is resized and overwritten.
double ae_loss_and_gradient(const AutoencoderModel& m, const Matrix& rows,
                            std::vector<LayerGrad>& grads);

// Mini-batch training on the configured population (majority-class rows by
// default, ties between class counts treat -1 as the majority). Captures the
// min/max table over that population, then runs config.epochs epochs of
// Fisher-Yates-shuffled batches (epoch e shuffles with seed
// derive_seed(seed, 0x5E9 + e)) under SGD or bias-corrected Adam
// (0.9 / 0.999 / 1e-8). Throws if the loss turns non-finite, naming the
// epoch. Returns the per-epoch mean loss trace.
AETrainReport ae_train(AutoencoderModel& m, const Dataset& d);

// Reconstruction error of one raw (unnormalized) row: the stored table is
// applied first. Requires a trained model.
double reconstruction_error(const AutoencoderModel& m, std::span<const double> x);

// Sets m.threshold to the lower-interpolation quantile (sorted errors at
// index floor(q * (n - 1))) of the reconstruction errors of the configured
// population of d. Returns the threshold.
double fit_threshold(AutoencoderModel& m, const Dataset& d);

// Drops every row whose reconstruction error exceeds the fitted threshold
// strictly. Survivors keep their order. Throws if a class disappears.
FilterResult filter_dataset(const AutoencoderModel& m, const Dataset& d);

// Lower-interpolation sample quantile: sorted[floor(q * (n - 1))].
double lower_quantile(std::vector<double> values, double q);

// Lossless text round-trip; byte-identical on re-serialization.
void write_autoencoder(std::ostream& out, const AutoencoderModel& m);
AutoencoderModel read_autoencoder(std::istream& in);

void save_autoencoder(const AutoencoderModel& m, const std::string& path);
AutoencoderModel load_autoencoder(const std::string& path);

} // namespace prcf
