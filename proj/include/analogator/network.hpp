#pragma once

// Three-layer feed-forward network with banked layers, logistic units and
// online backpropagation (momentum, separate bias learning rate).

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace analogator {

/// Named contiguous slice of a layer.
struct Bank {
    std::string name;
    std::size_t size = 0;
    std::size_t offset = 0;
};

/// Ordered, disjoint, contiguous banks covering one layer.
class BankLayout {
public:
    BankLayout() = default;
    BankLayout(std::initializer_list<std::pair<std::string, std::size_t>> banks);

    BankLayout& add(std::string name, std::size_t size);

    const std::vector<Bank>& banks() const { return banks_; }
    std::size_t total() const { return total_; }
    bool contains(std::string_view name) const;
    const Bank& at(std::string_view name) const;

    bool operator==(const BankLayout&) const = default;

private:
    std::vector<Bank> banks_;
    std::size_t total_ = 0;
};

struct Hyperparameters {
    double epsilon = 0.1;   // weight learning rate
    double bepsilon = 0.1;  // bias learning rate
    double momentum = 0.9;
    double maxrand = 0.003;
    double stoperr = 0.99;  // fraction of correct output units that ends training
    int maxepoch = 1000;
    bool roundOff = true;
    std::uint64_t seed = 0;
    bool shuffle = true;    // reshuffle pair order every epoch
    bool batch = false;     // apply accumulated gradient once per epoch

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

/// Raised when a trial produces non-finite activations.
class TrainingDiverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Activations {
    std::vector<double> hidden;
    std::vector<double> output;
};

/// Result of one propagate-and-backprop trial. `error` is desired - actual.
struct TrialResult {
    Activations activations;
    std::vector<double> error;
};

/// Partial derivatives of E = 1/2 * sum (desired - output)^2, laid out like
/// the network's parameters.
struct Gradient {
    std::vector<double> inputHidden;   // [hidden][input]
    std::vector<double> hiddenOutput;  // [output][hidden]
    std::vector<double> hiddenBias;
    std::vector<double> outputBias;

    void resize_like(std::size_t in, std::size_t hidden, std::size_t out);
    void clear();
};

double net_input(std::span<const double> activations, std::span<const double> weights, double bias);
double logistic(double sigma);

class Network {
public:
    Network(BankLayout inputs, std::size_t hiddenSize, BankLayout outputs, Hyperparameters hyper = {});

    std::size_t input_size() const { return inputs_.total(); }
    std::size_t hidden_size() const { return hidden_; }
    std::size_t output_size() const { return outputs_.total(); }
    const BankLayout& input_banks() const { return inputs_; }
    const BankLayout& output_banks() const { return outputs_; }
    const Hyperparameters& hyper() const { return hyper_; }
    Hyperparameters& hyper() { return hyper_; }

    /// Draw every weight and bias uniformly from (-maxrand, +maxrand) and
    /// clear the momentum accumulators.
    void init_weights(double maxrand, std::uint64_t seed);
    void init_weights() { init_weights(hyper_.maxrand, hyper_.seed); }

    Activations forward(std::span<const double> input) const;
    void forward(std::span<const double> input, Activations& out) const;

    Gradient gradient(std::span<const double> input, std::span<const double> desired) const;
    double squared_error(std::span<const double> input, std::span<const double> desired) const;

    /// One online trial: forward pass, error, weight update with momentum.
    TrialResult backprop_trial(std::span<const double> input, std::span<const double> desired);

    /// Batch mode: forward pass and gradient accumulation without touching
    /// weights. `apply_gradient` later performs the single momentum step.
    TrialResult accumulate_trial(std::span<const double> input, std::span<const double> desired,
                                 Gradient& accumulator) const;
    void apply_gradient(const Gradient& g);

    // Parameter access. Input-hidden is stored [hidden][input], hidden-output
    // [output][hidden].
    double weight_ih(std::size_t input, std::size_t hidden) const { return wIH_[hidden * input_size() + input]; }
    double& weight_ih(std::size_t input, std::size_t hidden) { return wIH_[hidden * input_size() + input]; }
    double weight_ho(std::size_t hidden, std::size_t output) const { return wHO_[output * hidden_ + hidden]; }
    double& weight_ho(std::size_t hidden, std::size_t output) { return wHO_[output * hidden_ + hidden]; }
    std::span<double> hidden_bias() { return bH_; }
    std::span<const double> hidden_bias() const { return bH_; }
    std::span<double> output_bias() { return bO_; }
    std::span<const double> output_bias() const { return bO_; }
    std::span<const double> previous_deltas_ih() const { return dIH_; }
    std::span<const double> previous_deltas_ho() const { return dHO_; }

    std::size_t weight_count() const { return wIH_.size() + wHO_.size(); }
    std::uint64_t weight_hash() const;
    bool all_finite() const;

    /// Snapshot text: `WTS <in> <hidden> <out> <seed>`, optional `#` comment
    /// lines, then input rows, hidden rows, hidden biases, output biases.
    void write_snapshot(std::ostream& os, std::uint64_t seed, std::string_view comment = {}) const;
    static Network read_snapshot(std::istream& is, BankLayout inputs, BankLayout outputs,
                                 Hyperparameters hyper = {}, std::uint64_t* seedOut = nullptr,
                                 std::string* commentOut = nullptr);

private:
    void check_input(std::span<const double> input) const;
    void backward(std::span<const double> input, std::span<const double> desired, const Activations& acts,
                  std::vector<double>& outDelta, std::vector<double>& hidDelta) const;

    BankLayout inputs_;
    std::size_t hidden_;
    BankLayout outputs_;
    Hyperparameters hyper_;

    std::vector<double> wIH_, wHO_, bH_, bO_;
    std::vector<double> dIH_, dHO_, dBH_, dBO_;  // previous deltas (momentum)

    // scratch for backprop_trial
    std::vector<double> outDelta_, hidDelta_;
};

enum class ScoreMode { Rounded, BankArgmax };

struct Score {
    std::size_t correct = 0;
    std::size_t total = 0;
    bool exact = true;

    double fraction() const { return total == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(total); }
};

/// Round half up: activations >= 0.5 count as 1.
inline int round_activation(double a) { return a >= 0.5 ? 1 : 0; }

/// Rounded mode counts units; argmax mode counts banks (a bank is correct when
/// its most active unit is the single desired unit).
Score score_outputs(std::span<const double> actual, std::span<const double> desired, ScoreMode mode,
                    const BankLayout* banks = nullptr);

}  // namespace analogator
