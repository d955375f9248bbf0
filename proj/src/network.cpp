#include "analogator/network.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "analogator/util.hpp"

namespace analogator {

BankLayout::BankLayout(std::initializer_list<std::pair<std::string, std::size_t>> banks) {
    for (const auto& [name, size] : banks) add(name, size);
}

BankLayout& BankLayout::add(std::string name, std::size_t size) {
    if (contains(name)) throw std::invalid_argument("duplicate bank name: " + name);
    banks_.push_back(Bank{std::move(name), size, total_});
    total_ += size;
    return *this;
}

bool BankLayout::contains(std::string_view name) const {
    return std::any_of(banks_.begin(), banks_.end(), [&](const Bank& b) { return b.name == name; });
}

const Bank& BankLayout::at(std::string_view name) const {
    for (const auto& b : banks_) {
        if (b.name == name) return b;
    }
    throw std::out_of_range("no bank named " + std::string(name));
}

void Hyperparameters::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (!(bepsilon > 0.0)) throw std::invalid_argument("bepsilon must be > 0");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw std::invalid_argument("momentum must be in [0, 1)");
    if (!(maxrand > 0.0)) throw std::invalid_argument("maxrand must be > 0");
    if (!(stoperr >= 0.0 && stoperr <= 1.0)) throw std::invalid_argument("stoperr must be in [0, 1]");
    if (maxepoch < 0) throw std::invalid_argument("maxepoch must be >= 0");
}

void Gradient::resize_like(std::size_t in, std::size_t hidden, std::size_t out) {
    inputHidden.assign(in * hidden, 0.0);
    hiddenOutput.assign(hidden * out, 0.0);
    hiddenBias.assign(hidden, 0.0);
    outputBias.assign(out, 0.0);
}

void Gradient::clear() {
    std::fill(inputHidden.begin(), inputHidden.end(), 0.0);
    std::fill(hiddenOutput.begin(), hiddenOutput.end(), 0.0);
    std::fill(hiddenBias.begin(), hiddenBias.end(), 0.0);
    std::fill(outputBias.begin(), outputBias.end(), 0.0);
}

double net_input(std::span<const double> activations, std::span<const double> weights, double bias) {
    if (activations.size() != weights.size()) {
        throw std::invalid_argument("net_input: activation/weight length mismatch");
    }
    double sum = bias;
    for (std::size_t i = 0; i < activations.size(); ++i) sum += activations[i] * weights[i];
    return sum;
}

double logistic(double sigma) { return 1.0 / (1.0 + std::exp(-sigma)); }

Network::Network(BankLayout inputs, std::size_t hiddenSize, BankLayout outputs, Hyperparameters hyper)
    : inputs_(std::move(inputs)), hidden_(hiddenSize), outputs_(std::move(outputs)), hyper_(hyper) {
    if (inputs_.total() == 0 || hidden_ == 0 || outputs_.total() == 0) {
        throw std::invalid_argument("network layers must be nonempty");
    }
    hyper_.validate();
    const std::size_t in = inputs_.total(), out = outputs_.total();
    wIH_.assign(in * hidden_, 0.0);
    wHO_.assign(hidden_ * out, 0.0);
    bH_.assign(hidden_, 0.0);
    bO_.assign(out, 0.0);
    dIH_.assign(wIH_.size(), 0.0);
    dHO_.assign(wHO_.size(), 0.0);
    dBH_.assign(hidden_, 0.0);
    dBO_.assign(out, 0.0);
}

void Network::init_weights(double maxrand, std::uint64_t seed) {
    if (!(maxrand > 0.0)) throw std::invalid_argument("maxrand must be > 0");
    Rng rng(seed);
    for (auto& w : wIH_) w = rng.symmetric(maxrand);
    for (auto& w : wHO_) w = rng.symmetric(maxrand);
    for (auto& b : bH_) b = rng.symmetric(maxrand);
    for (auto& b : bO_) b = rng.symmetric(maxrand);
    std::fill(dIH_.begin(), dIH_.end(), 0.0);
    std::fill(dHO_.begin(), dHO_.end(), 0.0);
    std::fill(dBH_.begin(), dBH_.end(), 0.0);
    std::fill(dBO_.begin(), dBO_.end(), 0.0);
}

void Network::check_input(std::span<const double> input) const {
    if (input.size() != input_size()) {
        throw std::invalid_argument("input pattern has " + std::to_string(input.size()) + " units, layer has " +
                                    std::to_string(input_size()));
    }
}

Activations Network::forward(std::span<const double> input) const {
    Activations a;
    forward(input, a);
    return a;
}

void Network::forward(std::span<const double> input, Activations& out) const {
    check_input(input);
    const std::size_t in = input_size(), nOut = output_size();
    out.hidden.resize(hidden_);
    out.output.resize(nOut);
    for (std::size_t h = 0; h < hidden_; ++h) {
        const double* w = &wIH_[h * in];
        double sum = bH_[h];
        for (std::size_t i = 0; i < in; ++i) sum += input[i] * w[i];
        out.hidden[h] = logistic(sum);
    }
    for (std::size_t o = 0; o < nOut; ++o) {
        const double* w = &wHO_[o * hidden_];
        double sum = bO_[o];
        for (std::size_t h = 0; h < hidden_; ++h) sum += out.hidden[h] * w[h];
        out.output[o] = logistic(sum);
    }
}

void Network::backward(std::span<const double> input, std::span<const double> desired, const Activations& acts,
                       std::vector<double>& outDelta, std::vector<double>& hidDelta) const {
    (void)input;
    const std::size_t nOut = output_size();
    outDelta.resize(nOut);
    hidDelta.resize(hidden_);
    for (std::size_t o = 0; o < nOut; ++o) {
        const double y = acts.output[o];
        outDelta[o] = (desired[o] - y) * y * (1.0 - y);
    }
    std::fill(hidDelta.begin(), hidDelta.end(), 0.0);
    for (std::size_t o = 0; o < nOut; ++o) {
        const double d = outDelta[o];
        if (d == 0.0) continue;
        const double* w = &wHO_[o * hidden_];
        for (std::size_t h = 0; h < hidden_; ++h) hidDelta[h] += w[h] * d;
    }
    for (std::size_t h = 0; h < hidden_; ++h) {
        const double a = acts.hidden[h];
        hidDelta[h] *= a * (1.0 - a);
    }
}

Gradient Network::gradient(std::span<const double> input, std::span<const double> desired) const {
    Gradient g;
    g.resize_like(input_size(), hidden_, output_size());
    (void)accumulate_trial(input, desired, g);
    return g;
}

double Network::squared_error(std::span<const double> input, std::span<const double> desired) const {
    const auto acts = forward(input);
    double e = 0.0;
    for (std::size_t o = 0; o < acts.output.size(); ++o) {
        const double d = desired[o] - acts.output[o];
        e += 0.5 * d * d;
    }
    return e;
}

namespace {

void check_finite(const Activations& a) {
    for (double v : a.output) {
        if (!std::isfinite(v)) throw TrainingDiverged("non-finite output activation");
    }
    for (double v : a.hidden) {
        if (!std::isfinite(v)) throw TrainingDiverged("non-finite hidden activation");
    }
}

std::vector<double> error_vector(std::span<const double> desired, const std::vector<double>& output) {
    std::vector<double> e(output.size());
    for (std::size_t o = 0; o < output.size(); ++o) e[o] = desired[o] - output[o];
    return e;
}

}  // namespace

TrialResult Network::accumulate_trial(std::span<const double> input, std::span<const double> desired,
                                      Gradient& acc) const {
    if (desired.size() != output_size()) throw std::invalid_argument("desired pattern size mismatch");
    TrialResult r;
    forward(input, r.activations);
    check_finite(r.activations);
    r.error = error_vector(desired, r.activations.output);
    std::vector<double> outDelta, hidDelta;
    backward(input, desired, r.activations, outDelta, hidDelta);
    // dE/dw = -delta * presynaptic activation
    const std::size_t in = input_size(), nOut = output_size();
    for (std::size_t o = 0; o < nOut; ++o) {
        double* g = &acc.hiddenOutput[o * hidden_];
        for (std::size_t h = 0; h < hidden_; ++h) g[h] -= outDelta[o] * r.activations.hidden[h];
        acc.outputBias[o] -= outDelta[o];
    }
    for (std::size_t h = 0; h < hidden_; ++h) {
        double* g = &acc.inputHidden[h * in];
        const double d = hidDelta[h];
        for (std::size_t i = 0; i < in; ++i) g[i] -= d * input[i];
        acc.hiddenBias[h] -= d;
    }
    return r;
}

void Network::apply_gradient(const Gradient& g) {
    const double eps = hyper_.epsilon, beps = hyper_.bepsilon, mu = hyper_.momentum;
    for (std::size_t k = 0; k < wIH_.size(); ++k) {
        const double d = -eps * g.inputHidden[k] + mu * dIH_[k];
        wIH_[k] += d;
        dIH_[k] = d;
    }
    for (std::size_t k = 0; k < wHO_.size(); ++k) {
        const double d = -eps * g.hiddenOutput[k] + mu * dHO_[k];
        wHO_[k] += d;
        dHO_[k] = d;
    }
    for (std::size_t k = 0; k < bH_.size(); ++k) {
        const double d = -beps * g.hiddenBias[k] + mu * dBH_[k];
        bH_[k] += d;
        dBH_[k] = d;
    }
    for (std::size_t k = 0; k < bO_.size(); ++k) {
        const double d = -beps * g.outputBias[k] + mu * dBO_[k];
        bO_[k] += d;
        dBO_[k] = d;
    }
}

TrialResult Network::backprop_trial(std::span<const double> input, std::span<const double> desired) {
    if (desired.size() != output_size()) throw std::invalid_argument("desired pattern size mismatch");
    TrialResult r;
    forward(input, r.activations);
    check_finite(r.activations);
    r.error = error_vector(desired, r.activations.output);
    backward(input, desired, r.activations, outDelta_, hidDelta_);

    const double eps = hyper_.epsilon, beps = hyper_.bepsilon, mu = hyper_.momentum;
    const std::size_t in = input_size(), nOut = output_size();
    for (std::size_t o = 0; o < nOut; ++o) {
        double* w = &wHO_[o * hidden_];
        double* prev = &dHO_[o * hidden_];
        const double scaled = eps * outDelta_[o];
        for (std::size_t h = 0; h < hidden_; ++h) {
            const double d = scaled * r.activations.hidden[h] + mu * prev[h];
            w[h] += d;
            prev[h] = d;
        }
        const double db = beps * outDelta_[o] + mu * dBO_[o];
        bO_[o] += db;
        dBO_[o] = db;
    }
    for (std::size_t h = 0; h < hidden_; ++h) {
        double* w = &wIH_[h * in];
        double* prev = &dIH_[h * in];
        const double scaled = eps * hidDelta_[h];
        for (std::size_t i = 0; i < in; ++i) {
            const double d = scaled * input[i] + mu * prev[i];
            w[i] += d;
            prev[i] = d;
        }
        const double db = beps * hidDelta_[h] + mu * dBH_[h];
        bH_[h] += db;
        dBH_[h] = db;
    }
    return r;
}

std::uint64_t Network::weight_hash() const {
    std::uint64_t h = fnv1a(std::span<const double>(wIH_));
    h = fnv1a(std::span<const double>(wHO_), h);
    h = fnv1a(std::span<const double>(bH_), h);
    return fnv1a(std::span<const double>(bO_), h);
}

bool Network::all_finite() const {
    auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    return finite(wIH_) && finite(wHO_) && finite(bH_) && finite(bO_);
}

void Network::write_snapshot(std::ostream& os, std::uint64_t seed, std::string_view comment) const {
    const std::size_t in = input_size(), nOut = output_size();
    os << "WTS " << in << ' ' << hidden_ << ' ' << nOut << ' ' << seed << '\n';
    if (!comment.empty()) os << "# " << comment << '\n';
    auto row = [&](auto&& value, std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (k) os << ' ';
            os << format_real17(value(k));
        }
        os << '\n';
    };
    for (std::size_t i = 0; i < in; ++i) row([&](std::size_t h) { return weight_ih(i, h); }, hidden_);
    for (std::size_t h = 0; h < hidden_; ++h) row([&](std::size_t o) { return weight_ho(h, o); }, nOut);
    row([&](std::size_t h) { return bH_[h]; }, hidden_);
    row([&](std::size_t o) { return bO_[o]; }, nOut);
}

Network Network::read_snapshot(std::istream& is, BankLayout inputs, BankLayout outputs, Hyperparameters hyper,
                               std::uint64_t* seedOut, std::string* commentOut) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("weight snapshot: empty input");
    const auto head = split_ws(line);
    if (head.size() != 5 || head[0] != "WTS") throw std::runtime_error("weight snapshot: bad header '" + line + "'");
    const auto in = static_cast<std::size_t>(parse_integer(head[1]));
    const auto hid = static_cast<std::size_t>(parse_integer(head[2]));
    const auto out = static_cast<std::size_t>(parse_integer(head[3]));
    if (seedOut) *seedOut = static_cast<std::uint64_t>(parse_integer(head[4]));
    if (inputs.total() == 0) inputs.add("input", in);
    if (outputs.total() == 0) outputs.add("output", out);
    if (inputs.total() != in || outputs.total() != out) {
        throw std::runtime_error("weight snapshot: layer sizes do not match the requested banks");
    }
    Network net(std::move(inputs), hid, std::move(outputs), hyper);

    std::vector<double> values;
    values.reserve(in * hid + hid * out + hid + out);
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] == '#') {
            if (commentOut && commentOut->empty()) *commentOut = line.size() > 2 ? line.substr(2) : std::string();
            continue;
        }
        for (const auto& tok : split_ws(line)) values.push_back(parse_real(tok));
    }
    if (values.size() != in * hid + hid * out + hid + out) {
        throw std::runtime_error("weight snapshot: expected " + std::to_string(in * hid + hid * out + hid + out) +
                                 " values, found " + std::to_string(values.size()));
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < in; ++i)
        for (std::size_t h = 0; h < hid; ++h) net.weight_ih(i, h) = values[k++];
    for (std::size_t h = 0; h < hid; ++h)
        for (std::size_t o = 0; o < out; ++o) net.weight_ho(h, o) = values[k++];
    for (std::size_t h = 0; h < hid; ++h) net.bH_[h] = values[k++];
    for (std::size_t o = 0; o < out; ++o) net.bO_[o] = values[k++];
    return net;
}

Score score_outputs(std::span<const double> actual, std::span<const double> desired, ScoreMode mode,
                    const BankLayout* banks) {
    if (actual.size() != desired.size()) throw std::invalid_argument("score_outputs: length mismatch");
    for (double d : desired) {
        if (d != 0.0 && d != 1.0) throw std::invalid_argument("score_outputs: desired pattern is not binary");
    }
    Score s;
    if (mode == ScoreMode::Rounded) {
        s.total = actual.size();
        for (std::size_t k = 0; k < actual.size(); ++k) {
            if (round_activation(actual[k]) == static_cast<int>(desired[k])) ++s.correct;
        }
        s.exact = s.correct == s.total;
        return s;
    }
    if (banks == nullptr || banks->total() != actual.size()) {
        throw std::invalid_argument("score_outputs: argmax mode needs bank boundaries covering the pattern");
    }
    for (const auto& bank : banks->banks()) {
        std::size_t want = bank.size, best = 0;
        for (std::size_t k = 0; k < bank.size; ++k) {
            if (desired[bank.offset + k] == 1.0) {
                if (want != bank.size) throw std::invalid_argument("score_outputs: bank has several desired units");
                want = k;
            }
            if (actual[bank.offset + k] > actual[bank.offset + best]) best = k;
        }
        if (want == bank.size) throw std::invalid_argument("score_outputs: bank has no desired unit");
        ++s.total;
        if (best == want) ++s.correct;
    }
    s.exact = s.correct == s.total;
    return s;
}

}  // namespace analogator
