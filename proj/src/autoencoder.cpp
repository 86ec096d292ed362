#include "prcf/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace prcf {
namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;
constexpr std::uint64_t kShuffleSaltBase = 0x5E9;

double activate(Activation a, double z) {
    switch (a) {
        case Activation::Identity: return z;
        case Activation::Rectifier: return z > 0.0 ? z : 0.0;
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
    }
    throw std::logic_error("unknown activation");
}

// Derivative expressed through the activation value; every supported
// activation allows that. Rectifier uses the subgradient 0 at the kink.
double activation_slope(Activation a, double value) {
    switch (a) {
        case Activation::Identity: return 1.0;
        case Activation::Rectifier: return value > 0.0 ? 1.0 : 0.0;
        case Activation::Sigmoid: return value * (1.0 - value);
    }
    throw std::logic_error("unknown activation");
}

// Dot product with four accumulators; the fixed summation order keeps the
// result deterministic while breaking the add latency chain.
double dot(const double* a, const double* b, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

void apply_layer(const DenseLayer& layer, const double* in, double* out) {
    for (std::size_t o = 0; o < layer.out; ++o)
        out[o] = activate(layer.activation,
                          dot(layer.weights.data() + o * layer.in, in, layer.in) + layer.bias[o]);
}

std::vector<std::size_t> population_rows(const Dataset& d, TrainingPopulation population) {
    std::vector<std::size_t> rows;
    if (population == TrainingPopulation::AllRows) {
        rows.resize(d.n_rows());
        for (std::size_t r = 0; r < d.n_rows(); ++r) rows[r] = r;
        return rows;
    }
    // Majority class; a tie counts the negative class as the majority.
    std::size_t pos = d.count_label(+1);
    int majority = (pos > d.n_rows() - pos) ? +1 : -1;
    for (std::size_t r = 0; r < d.n_rows(); ++r)
        if (d.labels[r] == majority) rows.push_back(r);
    return rows;
}

void validate_config(const AEConfig& c) {
    if (c.layer_widths.size() < 2)
        throw std::runtime_error("autoencoder needs at least an input and a bottleneck width");
    for (std::size_t i = 0; i + 1 < c.layer_widths.size(); ++i)
        if (c.layer_widths[i + 1] >= c.layer_widths[i])
            throw std::runtime_error("autoencoder widths must strictly decrease, got " +
                                     std::to_string(c.layer_widths[i]) + " then " +
                                     std::to_string(c.layer_widths[i + 1]));
    if (c.layer_widths.back() == 0)
        throw std::runtime_error("autoencoder widths must be positive");
    if (c.activations.size() != 2 * (c.layer_widths.size() - 1))
        throw std::runtime_error("autoencoder needs one activation per weight layer");
    if (c.batch_size == 0)
        throw std::runtime_error("batch_size must be at least 1");
    if (!(c.learning_rate >= 0.0) || !std::isfinite(c.learning_rate))
        throw std::runtime_error("learning_rate must be finite and non-negative");
    if (!(c.filter_quantile > 0.0 && c.filter_quantile < 1.0))
        throw std::runtime_error("filter_quantile must lie in (0, 1), got " +
                                 format_double(c.filter_quantile));
}

struct OptimizerState {
    std::vector<LayerGrad> first_moment;
    std::vector<LayerGrad> second_moment;
    std::size_t step = 0;
};

void apply_update(AutoencoderModel& m, const std::vector<LayerGrad>& grads, OptimizerState& state) {
    const double lr = m.config.learning_rate;
    if (m.config.optimizer == Optimizer::Sgd) {
        for (std::size_t l = 0; l < m.layers.size(); ++l) {
            auto& layer = m.layers[l];
            for (std::size_t i = 0; i < layer.weights.size(); ++i)
                layer.weights[i] -= lr * grads[l].weights[i];
            for (std::size_t i = 0; i < layer.bias.size(); ++i)
                layer.bias[i] -= lr * grads[l].bias[i];
        }
        return;
    }
    ++state.step;
    const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.step));
    auto adam = [&](double& param, double g, double& m1, double& m2) {
        m1 = kAdamBeta1 * m1 + (1.0 - kAdamBeta1) * g;
        m2 = kAdamBeta2 * m2 + (1.0 - kAdamBeta2) * g * g;
        param -= lr * (m1 / bc1) / (std::sqrt(m2 / bc2) + kAdamEpsilon);
    };
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        auto& layer = m.layers[l];
        for (std::size_t i = 0; i < layer.weights.size(); ++i)
            adam(layer.weights[i], grads[l].weights[i], state.first_moment[l].weights[i],
                 state.second_moment[l].weights[i]);
        for (std::size_t i = 0; i < layer.bias.size(); ++i)
            adam(layer.bias[i], grads[l].bias[i], state.first_moment[l].bias[i],
                 state.second_moment[l].bias[i]);
    }
}

std::vector<LayerGrad> make_grad_buffers(const AutoencoderModel& m) {
    std::vector<LayerGrad> grads(m.layers.size());
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        grads[l].weights.assign(m.layers[l].weights.size(), 0.0);
        grads[l].bias.assign(m.layers[l].bias.size(), 0.0);
    }
    return grads;
}

} // namespace

const char* to_string(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Rectifier: return "rectifier";
        case Activation::Sigmoid: return "sigmoid";
    }
    throw std::logic_error("unknown activation");
}

const char* to_string(Optimizer o) {
    return o == Optimizer::Sgd ? "sgd" : "adam";
}

const char* to_string(TrainingPopulation p) {
    return p == TrainingPopulation::AllRows ? "all" : "majority";
}

Activation activation_from_string(const std::string& s) {
    if (s == "identity") return Activation::Identity;
    if (s == "rectifier") return Activation::Rectifier;
    if (s == "sigmoid") return Activation::Sigmoid;
    throw std::runtime_error("unknown activation '" + s + "'");
}

Optimizer optimizer_from_string(const std::string& s) {
    if (s == "sgd") return Optimizer::Sgd;
    if (s == "adam") return Optimizer::Adam;
    throw std::runtime_error("unknown optimizer '" + s + "'");
}

TrainingPopulation population_from_string(const std::string& s) {
    if (s == "all") return TrainingPopulation::AllRows;
    if (s == "majority") return TrainingPopulation::MajorityOnly;
    throw std::runtime_error("unknown training population '" + s + "'");
}

AutoencoderModel ae_init(const AEConfig& config, std::size_t input_width) {
    if (input_width == 0)
        throw std::runtime_error("ae_init: input width must be positive");

    AutoencoderModel m;
    m.config = config;
    if (m.config.layer_widths.empty()) {
        m.config.layer_widths = {input_width, (input_width + 1) / 2, (input_width + 3) / 4};
        // Tiny inputs can make the defaults collide; drop non-decreasing tails.
        while (m.config.layer_widths.size() > 2 &&
               m.config.layer_widths[m.config.layer_widths.size() - 1] >=
                   m.config.layer_widths[m.config.layer_widths.size() - 2])
            m.config.layer_widths.pop_back();
    }
    if (m.config.layer_widths.front() != input_width)
        throw std::runtime_error("ae_init: first width " +
                                 std::to_string(m.config.layer_widths.front()) +
                                 " must equal the input width " + std::to_string(input_width));
    if (m.config.layer_widths.size() < 2)
        throw std::runtime_error("ae_init: need at least two widths (input and bottleneck)");
    const std::size_t n_layers = 2 * (m.config.layer_widths.size() - 1);
    if (m.config.activations.empty()) {
        m.config.activations.assign(n_layers, Activation::Rectifier);
        m.config.activations.back() = Activation::Identity;
    }
    validate_config(m.config);

    // Mirror the encoder widths to get the full layer width sequence.
    std::vector<std::size_t> widths = m.config.layer_widths;
    for (std::size_t i = m.config.layer_widths.size() - 1; i-- > 0;)
        widths.push_back(m.config.layer_widths[i]);

    m.layers.resize(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
        DenseLayer& layer = m.layers[l];
        layer.in = widths[l];
        layer.out = widths[l + 1];
        layer.activation = m.config.activations[l];
        layer.bias.assign(layer.out, 0.0);
        layer.weights.resize(layer.out * layer.in);
        Rng rng(derive_seed(config.seed, l));
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
        for (double& w : layer.weights) w = uniform_in(rng, -limit, limit);
    }
    return m;
}

AEForward ae_forward(const AutoencoderModel& m, std::span<const double> x) {
    if (m.layers.empty())
        throw std::runtime_error("ae_forward: model is uninitialized");
    if (x.size() != m.input_width())
        throw std::runtime_error("ae_forward: expected " + std::to_string(m.input_width()) +
                                 " inputs, got " + std::to_string(x.size()));
    std::vector<double> current(x.begin(), x.end());
    std::vector<double> next;
    AEForward result;
    const std::size_t encoder_layers = m.layers.size() / 2;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        next.resize(m.layers[l].out);
        apply_layer(m.layers[l], current.data(), next.data());
        current.swap(next);
        if (l + 1 == encoder_layers) result.latent = current;
    }
    result.reconstruction = std::move(current);
    return result;
}

double ae_mean_loss(const AutoencoderModel& m, const Matrix& rows) {
    if (rows.rows() == 0)
        throw std::runtime_error("ae_mean_loss: no rows");
    double total = 0.0;
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        auto fwd = ae_forward(m, rows.row(r));
        double row_loss = 0.0;
        for (std::size_t c = 0; c < rows.cols(); ++c) {
            double e = fwd.reconstruction[c] - rows(r, c);
            row_loss += e * e;
        }
        total += row_loss / static_cast<double>(rows.cols());
    }
    return total / static_cast<double>(rows.rows());
}

double ae_loss_and_gradient(const AutoencoderModel& m, const Matrix& rows,
                            std::vector<LayerGrad>& grads) {
    if (rows.rows() == 0)
        throw std::runtime_error("ae_loss_and_gradient: no rows");
    if (rows.cols() != m.input_width())
        throw std::runtime_error("ae_loss_and_gradient: expected " +
                                 std::to_string(m.input_width()) + " columns, got " +
                                 std::to_string(rows.cols()));

    grads = make_grad_buffers(m);
    const std::size_t n_layers = m.layers.size();
    const double d_width = static_cast<double>(rows.cols());

    // activations[0] is the input row; activations[l + 1] the output of layer l.
    std::vector<std::vector<double>> activations(n_layers + 1);
    std::vector<double> delta, delta_prev;
    double total_loss = 0.0;

    for (std::size_t r = 0; r < rows.rows(); ++r) {
        auto x = rows.row(r);
        activations[0].assign(x.begin(), x.end());
        for (std::size_t l = 0; l < n_layers; ++l) {
            activations[l + 1].resize(m.layers[l].out);
            apply_layer(m.layers[l], activations[l].data(), activations[l + 1].data());
        }

        const auto& output = activations[n_layers];
        delta.resize(output.size());
        double row_loss = 0.0;
        for (std::size_t c = 0; c < output.size(); ++c) {
            double e = output[c] - x[c];
            row_loss += e * e;
            delta[c] = (2.0 / d_width) * e *
                       activation_slope(m.layers[n_layers - 1].activation, output[c]);
        }
        total_loss += row_loss / d_width;

        for (std::size_t l = n_layers; l-- > 0;) {
            const DenseLayer& layer = m.layers[l];
            const auto& input = activations[l];
            for (std::size_t o = 0; o < layer.out; ++o) {
                double* gw = grads[l].weights.data() + o * layer.in;
                const double d_o = delta[o];
                for (std::size_t i = 0; i < layer.in; ++i) gw[i] += d_o * input[i];
                grads[l].bias[o] += d_o;
            }
            if (l == 0) break;
            delta_prev.assign(layer.in, 0.0);
            for (std::size_t o = 0; o < layer.out; ++o) {
                const double* w = layer.weights.data() + o * layer.in;
                const double d_o = delta[o];
                for (std::size_t i = 0; i < layer.in; ++i) delta_prev[i] += w[i] * d_o;
            }
            for (std::size_t i = 0; i < layer.in; ++i)
                delta_prev[i] *= activation_slope(m.layers[l - 1].activation, input[i]);
            delta.swap(delta_prev);
        }
    }

    const double inv_rows = 1.0 / static_cast<double>(rows.rows());
    for (auto& g : grads) {
        for (double& v : g.weights) v *= inv_rows;
        for (double& v : g.bias) v *= inv_rows;
    }
    return total_loss * inv_rows;
}

AETrainReport ae_train(AutoencoderModel& m, const Dataset& d) {
    if (m.layers.empty())
        throw std::runtime_error("ae_train: model is uninitialized");
    if (d.n_rows() == 0)
        throw std::runtime_error("ae_train: empty dataset");
    if (m.input_width() != d.n_features())
        throw std::runtime_error("ae_train: model expects " + std::to_string(m.input_width()) +
                                 " features, dataset has " + std::to_string(d.n_features()));

    auto rows = population_rows(d, m.config.training_population);
    if (rows.empty())
        throw std::runtime_error("ae_train: training population is empty");

    // Capture the rescaling over the training population only, then train in
    // the rescaled space.
    Dataset population = take_rows(d, rows);
    auto [normalized, table] = normalize_minmax(population);
    m.normalization = table;

    OptimizerState state;
    if (m.config.optimizer == Optimizer::Adam) {
        state.first_moment = make_grad_buffers(m);
        state.second_moment = make_grad_buffers(m);
    }

    AETrainReport report;
    report.epoch_loss.reserve(m.config.epochs);
    std::vector<std::size_t> order(normalized.n_rows());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<LayerGrad> grads;

    for (std::size_t epoch = 0; epoch < m.config.epochs; ++epoch) {
        Rng shuffle_rng(derive_seed(m.config.seed, kShuffleSaltBase + epoch));
        shuffle_inplace(order, shuffle_rng);

        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += m.config.batch_size) {
            std::size_t count = std::min(m.config.batch_size, order.size() - start);
            Matrix batch(count, normalized.n_features());
            for (std::size_t i = 0; i < count; ++i)
                for (std::size_t c = 0; c < normalized.n_features(); ++c)
                    batch(i, c) = normalized.features(order[start + i], c);
            double batch_loss = ae_loss_and_gradient(m, batch, grads);
            loss_sum += batch_loss * static_cast<double>(count);
            apply_update(m, grads, state);
        }
        double epoch_loss = loss_sum / static_cast<double>(order.size());
        if (!std::isfinite(epoch_loss))
            throw std::runtime_error("ae_train: loss diverged at epoch " + std::to_string(epoch) +
                                     " (try a lower learning rate)");
        report.epoch_loss.push_back(epoch_loss);
    }
    m.trained = true;
    return report;
}

double reconstruction_error(const AutoencoderModel& m, std::span<const double> x) {
    if (!m.trained || !m.normalization)
        throw std::runtime_error("reconstruction_error: model is not trained");
    if (x.size() != m.input_width())
        throw std::runtime_error("reconstruction_error: expected " +
                                 std::to_string(m.input_width()) + " features, got " +
                                 std::to_string(x.size()));
    const auto& table = *m.normalization;
    std::vector<double> scaled(x.size());
    for (std::size_t c = 0; c < x.size(); ++c) {
        double range = table.max[c] - table.min[c];
        scaled[c] = range > 0.0 ? (x[c] - table.min[c]) / range : 0.0;
    }
    auto fwd = ae_forward(m, scaled);
    double loss = 0.0;
    for (std::size_t c = 0; c < scaled.size(); ++c) {
        double e = fwd.reconstruction[c] - scaled[c];
        loss += e * e;
    }
    return loss / static_cast<double>(scaled.size());
}

double lower_quantile(std::vector<double> values, double q) {
    if (values.empty())
        throw std::runtime_error("lower_quantile: no values");
    if (!(q > 0.0 && q < 1.0))
        throw std::runtime_error("lower_quantile: q must lie in (0, 1), got " + format_double(q));
    std::sort(values.begin(), values.end());
    auto idx = static_cast<std::size_t>(
        std::floor(q * static_cast<double>(values.size() - 1)));
    return values[idx];
}

double fit_threshold(AutoencoderModel& m, const Dataset& d) {
    if (!m.trained)
        throw std::runtime_error("fit_threshold: model is not trained");
    auto rows = population_rows(d, m.config.training_population);
    if (rows.empty())
        throw std::runtime_error("fit_threshold: population is empty");
    std::vector<double> errors;
    errors.reserve(rows.size());
    for (std::size_t r : rows) errors.push_back(reconstruction_error(m, d.features.row(r)));
    m.threshold = lower_quantile(std::move(errors), m.config.filter_quantile);
    return m.threshold;
}

FilterResult filter_dataset(const AutoencoderModel& m, const Dataset& d) {
    if (!m.trained || m.threshold < 0.0)
        throw std::runtime_error("filter_dataset: threshold has not been fitted");
    FilterResult result;
    std::vector<std::size_t> kept;
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
        if (reconstruction_error(m, d.features.row(r)) > m.threshold)
            result.flagged_rows.push_back(r);
        else
            kept.push_back(r);
    }
    result.kept = take_rows(d, kept);
    bool has_pos = false, has_neg = false;
    for (int y : result.kept.labels) (y > 0 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg)
        throw std::runtime_error("filter_dataset: filtering removed every row of one class (" +
                                 std::to_string(result.flagged_rows.size()) + " of " +
                                 std::to_string(d.n_rows()) + " rows flagged)");
    return result;
}

namespace {

std::string next_line(std::istream& in, const std::string& expect) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("autoencoder model corrupt: unexpected end of input, expected " +
                                 expect);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::vector<double> parse_vector(const std::string& line, std::size_t expect,
                                 const std::string& what) {
    std::istringstream ls(line);
    std::vector<double> out;
    out.reserve(expect);
    std::string token;
    while (ls >> token) out.push_back(parse_double(token, what));
    if (out.size() != expect)
        throw std::runtime_error("autoencoder model corrupt: " + what + " has " +
                                 std::to_string(out.size()) + " values, expected " +
                                 std::to_string(expect));
    return out;
}

void write_vector(std::ostream& out, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        out << (i ? " " : "") << format_double(v[i]);
    out << '\n';
}

} // namespace

void write_autoencoder(std::ostream& out, const AutoencoderModel& m) {
    out << "prcf_autoencoder_v1\n";
    out << "widths";
    for (std::size_t w : m.config.layer_widths) out << ' ' << w;
    out << '\n';
    out << "activations";
    for (Activation a : m.config.activations) out << ' ' << to_string(a);
    out << '\n';
    out << "optimizer " << to_string(m.config.optimizer) << " epochs " << m.config.epochs
        << " batch_size " << m.config.batch_size << " learning_rate "
        << format_double(m.config.learning_rate) << " seed " << m.config.seed << '\n';
    out << "filter_quantile " << format_double(m.config.filter_quantile)
        << " training_population " << to_string(m.config.training_population) << '\n';
    out << "trained " << (m.trained ? 1 : 0) << '\n';
    out << "normalization " << (m.normalization ? 1 : 0) << '\n';
    if (m.normalization) {
        out << "norm_min ";
        write_vector(out, m.normalization->min);
        out << "norm_max ";
        write_vector(out, m.normalization->max);
    }
    out << "threshold " << (m.threshold < 0.0 ? "none" : format_double(m.threshold)) << '\n';
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        const DenseLayer& layer = m.layers[l];
        out << "layer " << l << " in " << layer.in << " out " << layer.out << " activation "
            << to_string(layer.activation) << '\n';
        for (std::size_t o = 0; o < layer.out; ++o) {
            out << "W ";
            for (std::size_t i = 0; i < layer.in; ++i)
                out << (i ? " " : "") << format_double(layer.weights[o * layer.in + i]);
            out << '\n';
        }
        out << "b ";
        write_vector(out, layer.bias);
    }
    out << "end_autoencoder\n";
}

AutoencoderModel read_autoencoder(std::istream& in) {
    auto corrupt = [](const std::string& detail) -> std::runtime_error {
        return std::runtime_error("autoencoder model corrupt: " + detail);
    };
    if (next_line(in, "header") != "prcf_autoencoder_v1")
        throw corrupt("missing prcf_autoencoder_v1 header");

    AutoencoderModel m;
    {
        std::istringstream ls(next_line(in, "widths"));
        std::string tag;
        ls >> tag;
        if (tag != "widths") throw corrupt("malformed widths line");
        std::size_t w = 0;
        while (ls >> w) m.config.layer_widths.push_back(w);
        if (m.config.layer_widths.size() < 2) throw corrupt("need at least 2 widths");
    }
    {
        std::istringstream ls(next_line(in, "activations"));
        std::string tag, name;
        ls >> tag;
        if (tag != "activations") throw corrupt("malformed activations line");
        while (ls >> name) m.config.activations.push_back(activation_from_string(name));
    }
    {
        std::istringstream ls(next_line(in, "optimizer"));
        std::string t0, opt, t1, t2, t3, lr, t4;
        ls >> t0 >> opt >> t1 >> m.config.epochs >> t2 >> m.config.batch_size >> t3 >> lr >> t4 >>
            m.config.seed;
        if (!ls || t0 != "optimizer") throw corrupt("malformed optimizer line");
        m.config.optimizer = optimizer_from_string(opt);
        m.config.learning_rate = parse_double(lr, "learning_rate");
    }
    {
        std::istringstream ls(next_line(in, "filter_quantile"));
        std::string t0, q, t1, pop;
        ls >> t0 >> q >> t1 >> pop;
        if (!ls || t0 != "filter_quantile") throw corrupt("malformed filter_quantile line");
        m.config.filter_quantile = parse_double(q, "filter_quantile");
        m.config.training_population = population_from_string(pop);
    }
    validate_config(m.config);
    {
        std::istringstream ls(next_line(in, "trained"));
        std::string tag;
        int flag = 0;
        ls >> tag >> flag;
        if (!ls || tag != "trained") throw corrupt("malformed trained line");
        m.trained = flag != 0;
    }
    int has_norm = 0;
    {
        std::istringstream ls(next_line(in, "normalization"));
        std::string tag;
        ls >> tag >> has_norm;
        if (!ls || tag != "normalization") throw corrupt("malformed normalization line");
    }
    const std::size_t width = m.config.layer_widths.front();
    if (has_norm) {
        MinMaxTable table;
        std::string line = next_line(in, "norm_min");
        if (line.rfind("norm_min ", 0) != 0) throw corrupt("missing norm_min");
        table.min = parse_vector(line.substr(9), width, "norm_min");
        line = next_line(in, "norm_max");
        if (line.rfind("norm_max ", 0) != 0) throw corrupt("missing norm_max");
        table.max = parse_vector(line.substr(9), width, "norm_max");
        m.normalization = std::move(table);
    }
    {
        std::istringstream ls(next_line(in, "threshold"));
        std::string tag, value;
        ls >> tag >> value;
        if (!ls || tag != "threshold") throw corrupt("malformed threshold line");
        m.threshold = (value == "none") ? -1.0 : parse_double(value, "threshold");
    }

    const std::size_t n_layers = 2 * (m.config.layer_widths.size() - 1);
    m.layers.resize(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
        DenseLayer& layer = m.layers[l];
        std::istringstream ls(next_line(in, "layer header"));
        std::string t0, t1, t2, t3, act;
        std::size_t index = 0;
        ls >> t0 >> index >> t1 >> layer.in >> t2 >> layer.out >> t3 >> act;
        if (!ls || t0 != "layer" || index != l) throw corrupt("malformed layer header");
        layer.activation = activation_from_string(act);
        layer.weights.resize(layer.out * layer.in);
        for (std::size_t o = 0; o < layer.out; ++o) {
            std::string line = next_line(in, "weight row");
            if (line.rfind("W ", 0) != 0) throw corrupt("missing weight row");
            auto row = parse_vector(line.substr(2), layer.in, "weight row");
            std::copy(row.begin(), row.end(), layer.weights.begin() + static_cast<std::ptrdiff_t>(o * layer.in));
        }
        std::string line = next_line(in, "bias row");
        if (line.rfind("b ", 0) != 0) throw corrupt("missing bias row");
        layer.bias = parse_vector(line.substr(2), layer.out, "bias row");
    }
    if (next_line(in, "end_autoencoder") != "end_autoencoder")
        throw corrupt("missing end_autoencoder marker");

    // Structural consistency with the declared widths.
    std::vector<std::size_t> widths = m.config.layer_widths;
    for (std::size_t i = m.config.layer_widths.size() - 1; i-- > 0;)
        widths.push_back(m.config.layer_widths[i]);
    for (std::size_t l = 0; l < n_layers; ++l)
        if (m.layers[l].in != widths[l] || m.layers[l].out != widths[l + 1])
            throw corrupt("layer " + std::to_string(l) + " shape disagrees with widths");
    return m;
}

void save_autoencoder(const AutoencoderModel& m, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write file '" + path + "'");
    write_autoencoder(out, m);
    if (!out)
        throw std::runtime_error("write failed for '" + path + "'");
}

AutoencoderModel load_autoencoder(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open file '" + path + "'");
    return read_autoencoder(in);
}

} // namespace prcf
