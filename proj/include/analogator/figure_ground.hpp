#pragma once

// The recurrent figure-ground associating procedure.
//
// Step 1: scene bank <- source, context bank <- source figure mask; train
//         toward (source figure | source ground).
// Step 2: scene bank <- target, context bank <- step-1 hidden activations;
//         train toward (target figure | target ground).
//
// The hidden layer and the context bank are the same size so the copy is a
// plain assignment. The copied vector is the step-1 forward-pass hidden
// pattern; it is not recomputed after the step-1 weight update.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "analogator/network.hpp"

namespace analogator {

struct AnalogyPair {
    std::vector<double> source;
    std::vector<double> sourceFigureMask;
    std::vector<double> sourceFigure;
    std::vector<double> sourceGround;
    std::vector<double> target;
    std::vector<double> targetFigure;
    std::vector<double> targetGround;
    std::vector<double> hints;  // empty unless the domain uses hint units

    bool operator==(const AnalogyPair&) const = default;
};

/// Bank sizes of one domain configuration.
struct FigureGroundShape {
    std::size_t scene = 0;
    std::size_t hints = 0;
    std::size_t context = 0;  // also the hidden size of the recurrent net
    std::size_t figure = 0;
    std::size_t ground = 0;

    std::size_t srn_input() const { return scene + hints + context; }
    std::size_t ff_input() const { return 2 * scene + hints + context; }
    std::size_t output() const { return figure + ground; }

    bool operator==(const FigureGroundShape&) const = default;
};

/// Throws std::invalid_argument when a pattern does not fit its bank.
void check_pair(const AnalogyPair& pair, const FigureGroundShape& shape);

/// Input banks S (scene, hints appended when present) and C (context), output
/// banks F and G, hidden size = context size.
Network make_analogator_network(const FigureGroundShape& shape, const Hyperparameters& hyper);
/// Input banks S, SF, T (plus hints), output banks F and G. The hidden layer
/// matches the recurrent net's.
Network make_feedforward_network(const FigureGroundShape& shape, const Hyperparameters& hyper);

struct StepTrace {
    int step = 0;
    std::vector<double> hidden;
    std::vector<double> output;
    std::vector<double> error;

    bool operator==(const StepTrace&) const = default;
};

StepTrace train_step1(Network& net, const AnalogyPair& pair);
StepTrace train_step2(Network& net, const AnalogyPair& pair, std::span<const double> step1Hidden);

/// Desired output of each step.
std::vector<double> step1_desired(const AnalogyPair& pair);
std::vector<double> step2_desired(const AnalogyPair& pair);

struct EpochOptions {
    bool keepTraces = false;
    bool zeroContext = false;    // ablation: step 2 sees an all-zero context
    bool zeroTarget = false;     // feed-forward ablation: T bank zeroed
};

struct EpochReport {
    double percentCorrect = 0.0;  // correct output units / total, both steps
    double step1Correct = 0.0;
    double step2Correct = 0.0;
    std::size_t correctUnits = 0;
    std::size_t totalUnits = 0;
    std::size_t trials = 0;
    std::vector<StepTrace> traces;  // step1, step2 per pair when kept
};

/// One sweep over `order` (indices into `pairs`): step 1, copy, step 2.
EpochReport train_epoch(Network& net, std::span<const AnalogyPair> pairs, std::span<const std::size_t> order,
                        const EpochOptions& options = {});

struct RunReport {
    std::uint64_t seed = 0;
    std::vector<double> curve;  // percent correct (0..100) per epoch
    int epochs = 0;
    std::size_t trials = 0;
    bool converged = false;
    bool diverged = false;
    std::optional<int> criterionEpoch;  // first epoch at or above stoperr
    std::string failure;
    bool shuffle = true;
    std::string architecture = "srn";

    std::optional<std::size_t> testExact;
    std::optional<std::size_t> testTotal;
    std::optional<double> testPixelErrors;

    std::optional<int> epochs_to_criterion() const { return criterionEpoch; }

    /// Plain-text record; `header` becomes a leading `#` comment line.
    void write(std::ostream& os, const std::string& header = {}) const;
};

struct TrainOptions {
    double stoperr = 0.99;
    int maxepoch = 1000;
    int minepoch = 0;  // keep training past the criterion until this many epochs
    std::size_t maxtrials = 0;  // 0 = unlimited; an epoch that would exceed it is not started
    EpochOptions epoch;
};

/// Epochs until percent correct >= stoperr or maxepoch. Order is reshuffled
/// each epoch from hyper.seed when hyper.shuffle is set. Non-convergence and
/// divergence are reported, not thrown.
RunReport train_until(Network& net, std::span<const AnalogyPair> pairs, std::span<const std::size_t> trainIdx,
                      const TrainOptions& options);

struct Inference {
    StepTrace step1;
    StepTrace step2;
    std::vector<double> figure;  // predicted target figure (binary)
    std::vector<double> ground;  // predicted target ground (binary)
};

/// Evaluation pass: step 1 forward, copy, step 2 forward. No weight updates.
/// Rounded mode thresholds at 0.5; argmax mode marks the winner of each bank.
Inference infer(const Network& net, const AnalogyPair& pair, ScoreMode mode = ScoreMode::Rounded,
                bool zeroContext = false);

/// Feed-forward baseline.
EpochReport train_ff_epoch(Network& net, std::span<const AnalogyPair> pairs, std::span<const std::size_t> order,
                           const EpochOptions& options = {});
RunReport train_ff_baseline(Network& net, std::span<const AnalogyPair> pairs, std::span<const std::size_t> trainIdx,
                            const TrainOptions& options);
Inference infer_ff(const Network& net, const AnalogyPair& pair, ScoreMode mode = ScoreMode::Rounded,
                   bool zeroTarget = false);

/// Longest run with no epoch-over-epoch gain above `minGain` (percentage
/// points) reaches `window` epochs.
bool detect_plateau(std::span<const double> curve, std::size_t window = 50, double minGain = 0.1);

}  // namespace analogator
