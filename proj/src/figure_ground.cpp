#include "analogator/figure_ground.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "analogator/util.hpp"

namespace analogator {

namespace {

void append(std::vector<double>& dst, std::span<const double> src) { dst.insert(dst.end(), src.begin(), src.end()); }

void require_size(std::span<const double> v, std::size_t n, const char* what) {
    if (v.size() != n) {
        throw std::invalid_argument(std::string(what) + " has " + std::to_string(v.size()) + " units, bank has " +
                                    std::to_string(n));
    }
}

void require_binary(std::span<const double> v, const char* what) {
    for (double x : v)
        if (x != 0.0 && x != 1.0) throw std::invalid_argument(std::string(what) + " is not binary");
}

BankLayout output_layout(const FigureGroundShape& s) {
    BankLayout out;
    out.add("F", s.figure).add("G", s.ground);
    return out;
}

std::vector<double> srn_input(const AnalogyPair& pair, bool step2, std::span<const double> context) {
    std::vector<double> in;
    in.reserve(pair.source.size() + pair.hints.size() + context.size());
    append(in, step2 ? pair.target : pair.source);
    append(in, pair.hints);
    append(in, context);
    return in;
}

std::vector<double> ff_input(const AnalogyPair& pair, bool zeroTarget) {
    std::vector<double> in;
    in.reserve(pair.source.size() * 2 + pair.sourceFigureMask.size() + pair.hints.size());
    append(in, pair.source);
    append(in, pair.sourceFigureMask);
    if (zeroTarget) {
        in.insert(in.end(), pair.target.size(), 0.0);
    } else {
        append(in, pair.target);
    }
    append(in, pair.hints);
    return in;
}

std::vector<double> predict(std::span<const double> output, ScoreMode mode, const BankLayout& banks) {
    std::vector<double> p(output.size(), 0.0);
    if (mode == ScoreMode::Rounded) {
        for (std::size_t i = 0; i < output.size(); ++i) p[i] = round_activation(output[i]);
        return p;
    }
    for (const auto& b : banks.banks()) {
        const auto first = output.begin() + static_cast<std::ptrdiff_t>(b.offset);
        const auto best = std::max_element(first, first + static_cast<std::ptrdiff_t>(b.size));
        p[static_cast<std::size_t>(best - output.begin())] = 1.0;
    }
    return p;
}

void tally(EpochReport& rep, std::span<const double> output, std::span<const double> desired, int step) {
    const auto s = score_outputs(output, desired, ScoreMode::Rounded);
    rep.correctUnits += s.correct;
    rep.totalUnits += s.total;
    (step == 1 ? rep.step1Correct : rep.step2Correct) += static_cast<double>(s.correct);
}

void finish(EpochReport& rep, std::size_t unitsPerStep1, std::size_t unitsPerStep2) {
    rep.percentCorrect = rep.totalUnits ? static_cast<double>(rep.correctUnits) / rep.totalUnits : 1.0;
    const double n = static_cast<double>(rep.trials);
    rep.step1Correct = (n > 0 && unitsPerStep1) ? rep.step1Correct / (n * unitsPerStep1) : 1.0;
    rep.step2Correct = (n > 0 && unitsPerStep2) ? rep.step2Correct / (n * unitsPerStep2) : 1.0;
}

StepTrace to_trace(int step, TrialResult&& r) {
    return {step, std::move(r.activations.hidden), std::move(r.activations.output), std::move(r.error)};
}

}  // namespace

void check_pair(const AnalogyPair& p, const FigureGroundShape& s) {
    require_size(p.source, s.scene, "source");
    require_size(p.target, s.scene, "target");
    require_size(p.sourceFigureMask, s.context, "source figure mask");
    require_size(p.sourceFigure, s.figure, "source figure");
    require_size(p.sourceGround, s.ground, "source ground");
    require_size(p.targetFigure, s.figure, "target figure");
    require_size(p.targetGround, s.ground, "target ground");
    require_size(p.hints, s.hints, "hints");
    require_binary(p.sourceFigure, "source figure");
    require_binary(p.sourceGround, "source ground");
    require_binary(p.targetFigure, "target figure");
    require_binary(p.targetGround, "target ground");
}

Network make_analogator_network(const FigureGroundShape& s, const Hyperparameters& hyper) {
    if (s.context == 0) throw std::invalid_argument("context bank must be nonempty");
    BankLayout in;
    in.add("S", s.scene);
    if (s.hints) in.add("H", s.hints);
    in.add("C", s.context);
    Network net(std::move(in), s.context, output_layout(s), hyper);
    net.init_weights();
    return net;
}

Network make_feedforward_network(const FigureGroundShape& s, const Hyperparameters& hyper) {
    BankLayout in;
    in.add("S", s.scene).add("SF", s.context).add("T", s.scene);
    if (s.hints) in.add("H", s.hints);
    Network net(std::move(in), s.context, output_layout(s), hyper);
    net.init_weights();
    return net;
}

std::vector<double> step1_desired(const AnalogyPair& p) {
    std::vector<double> d = p.sourceFigure;
    append(d, p.sourceGround);
    return d;
}

std::vector<double> step2_desired(const AnalogyPair& p) {
    std::vector<double> d = p.targetFigure;
    append(d, p.targetGround);
    return d;
}

StepTrace train_step1(Network& net, const AnalogyPair& pair) {
    return to_trace(1, net.backprop_trial(srn_input(pair, false, pair.sourceFigureMask), step1_desired(pair)));
}

StepTrace train_step2(Network& net, const AnalogyPair& pair, std::span<const double> step1Hidden) {
    if (step1Hidden.size() != net.hidden_size() || net.input_banks().at("C").size != step1Hidden.size()) {
        throw std::invalid_argument("step-1 hidden vector does not fit the context bank");
    }
    return to_trace(2, net.backprop_trial(srn_input(pair, true, step1Hidden), step2_desired(pair)));
}

EpochReport train_epoch(Network& net, std::span<const AnalogyPair> pairs, std::span<const std::size_t> order,
                        const EpochOptions& options) {
    EpochReport rep;
    const bool batch = net.hyper().batch;
    Gradient acc;
    if (batch) acc.resize_like(net.input_size(), net.hidden_size(), net.output_size());
    const std::vector<double> zeros(net.hidden_size(), 0.0);
    std::size_t units1 = 0, units2 = 0;
    for (auto idx : order) {
        const auto& pair = pairs[idx];
        const auto d1 = step1_desired(pair);
        const auto d2 = step2_desired(pair);
        const auto in1 = srn_input(pair, false, pair.sourceFigureMask);
        TrialResult r1 = batch ? net.accumulate_trial(in1, d1, acc) : net.backprop_trial(in1, d1);
        tally(rep, r1.activations.output, d1, 1);
        std::span<const double> ctx = options.zeroContext ? std::span<const double>(zeros)
                                                          : std::span<const double>(r1.activations.hidden);
        const auto in2 = srn_input(pair, true, ctx);
        TrialResult r2 = batch ? net.accumulate_trial(in2, d2, acc) : net.backprop_trial(in2, d2);
        tally(rep, r2.activations.output, d2, 2);
        units1 = d1.size();
        units2 = d2.size();
        ++rep.trials;
        if (options.keepTraces) {
            rep.traces.push_back(to_trace(1, std::move(r1)));
            rep.traces.push_back(to_trace(2, std::move(r2)));
        }
    }
    if (batch && !order.empty()) net.apply_gradient(acc);
    finish(rep, units1, units2);
    return rep;
}

EpochReport train_ff_epoch(Network& net, std::span<const AnalogyPair> pairs, std::span<const std::size_t> order,
                           const EpochOptions& options) {
    EpochReport rep;
    const bool batch = net.hyper().batch;
    Gradient acc;
    if (batch) acc.resize_like(net.input_size(), net.hidden_size(), net.output_size());
    std::size_t units = 0;
    for (auto idx : order) {
        const auto& pair = pairs[idx];
        const auto d = step2_desired(pair);
        const auto in = ff_input(pair, options.zeroTarget);
        TrialResult r = batch ? net.accumulate_trial(in, d, acc) : net.backprop_trial(in, d);
        tally(rep, r.activations.output, d, 2);
        units = d.size();
        ++rep.trials;
        if (options.keepTraces) rep.traces.push_back(to_trace(2, std::move(r)));
    }
    if (batch && !order.empty()) net.apply_gradient(acc);
    finish(rep, 0, units);
    return rep;
}

namespace {

template <typename EpochFn>
RunReport run_epochs(Network& net, std::span<const std::size_t> trainIdx, const TrainOptions& opt, EpochFn epoch) {
    RunReport rep;
    rep.seed = net.hyper().seed;
    rep.shuffle = net.hyper().shuffle;
    std::vector<std::size_t> order(trainIdx.begin(), trainIdx.end());
    Rng rng(mix_seed(net.hyper().seed, 0x0e9c0c4ULL));
    try {
        while (rep.epochs < opt.maxepoch) {
            if (opt.maxtrials && rep.trials + order.size() > opt.maxtrials) break;
            if (rep.shuffle) rng.shuffle(order);
            const auto er = epoch(order);
            ++rep.epochs;
            rep.trials += er.trials;
            rep.curve.push_back(100.0 * er.percentCorrect);
            if (!net.all_finite()) throw TrainingDiverged("non-finite weight after update");
            if (er.percentCorrect >= opt.stoperr) {
                if (!rep.criterionEpoch) rep.criterionEpoch = rep.epochs;
                rep.converged = true;
                if (rep.epochs >= opt.minepoch) break;
            }
        }
    } catch (const TrainingDiverged& e) {
        rep.diverged = true;
        rep.failure = e.what();
    }
    if (!rep.converged && rep.failure.empty()) {
        rep.failure = rep.epochs >= opt.maxepoch ? "maxepoch reached" : "trial budget reached";
    }
    return rep;
}

}  // namespace

RunReport train_until(Network& net, std::span<const AnalogyPair> pairs, std::span<const std::size_t> trainIdx,
                      const TrainOptions& options) {
    auto rep = run_epochs(net, trainIdx, options, [&](std::span<const std::size_t> order) {
        return train_epoch(net, pairs, order, options.epoch);
    });
    rep.architecture = "srn";
    return rep;
}

RunReport train_ff_baseline(Network& net, std::span<const AnalogyPair> pairs, std::span<const std::size_t> trainIdx,
                            const TrainOptions& options) {
    auto rep = run_epochs(net, trainIdx, options, [&](std::span<const std::size_t> order) {
        return train_ff_epoch(net, pairs, order, options.epoch);
    });
    rep.architecture = "ff";
    return rep;
}

Inference infer(const Network& net, const AnalogyPair& pair, ScoreMode mode, bool zeroContext) {
    Inference out;
    auto a1 = net.forward(srn_input(pair, false, pair.sourceFigureMask));
    const std::vector<double> zeros(net.hidden_size(), 0.0);
    auto a2 = net.forward(srn_input(pair, true, zeroContext ? std::span<const double>(zeros)
                                                            : std::span<const double>(a1.hidden)));
    auto err = [](std::span<const double> d, std::span<const double> o) {
        std::vector<double> e(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) e[i] = d[i] - o[i];
        return e;
    };
    out.step1 = {1, a1.hidden, a1.output, err(step1_desired(pair), a1.output)};
    out.step2 = {2, a2.hidden, a2.output, err(step2_desired(pair), a2.output)};
    const auto p = predict(a2.output, mode, net.output_banks());
    const auto nf = net.output_banks().at("F").size;
    out.figure.assign(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(nf));
    out.ground.assign(p.begin() + static_cast<std::ptrdiff_t>(nf), p.end());
    return out;
}

Inference infer_ff(const Network& net, const AnalogyPair& pair, ScoreMode mode, bool zeroTarget) {
    Inference out;
    auto a = net.forward(ff_input(pair, zeroTarget));
    const auto d = step2_desired(pair);
    std::vector<double> e(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) e[i] = d[i] - a.output[i];
    out.step2 = {2, a.hidden, a.output, std::move(e)};
    const auto p = predict(a.output, mode, net.output_banks());
    const auto nf = net.output_banks().at("F").size;
    out.figure.assign(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(nf));
    out.ground.assign(p.begin() + static_cast<std::ptrdiff_t>(nf), p.end());
    return out;
}

bool detect_plateau(std::span<const double> curve, std::size_t window, double minGain) {
    if (window == 0) return true;
    if (curve.size() < window + 1) return false;
    // gain is measured against the best value so far
    double best = curve[0];
    std::size_t flat = 0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (curve[i] > best + minGain) {
            best = curve[i];
            flat = 0;
        } else {
            best = std::max(best, curve[i]);
            if (++flat >= window) return true;
        }
    }
    return false;
}

void RunReport::write(std::ostream& os, const std::string& header) const {
    if (!header.empty()) os << "# " << header << '\n';
    os << "architecture " << architecture << '\n';
    os << "seed " << seed << '\n';
    os << "shuffle " << (shuffle ? 1 : 0) << '\n';
    os << "momentum single-stream\n";
    for (std::size_t i = 0; i < curve.size(); ++i) os << "epoch " << (i + 1) << " percent " << format_real(curve[i]) << '\n';
    os << "epochs " << epochs << '\n';
    os << "converged " << (converged ? 1 : 0) << '\n';
    if (auto e = epochs_to_criterion()) {
        os << "epochs_to_criterion " << *e << '\n';
    } else {
        os << "epochs_to_criterion none\n";
    }
    os << "trials " << trials << '\n';
    if (testExact && testTotal) {
        os << "test_exact " << *testExact << ' ' << *testTotal << '\n';
    } else {
        os << "test_exact none\n";
    }
    if (testPixelErrors) {
        os << "test_pixel_errors " << format_real(*testPixelErrors) << '\n';
    } else {
        os << "test_pixel_errors none\n";
    }
    if (!failure.empty()) os << "failure " << failure << '\n';
}

}  // namespace analogator
