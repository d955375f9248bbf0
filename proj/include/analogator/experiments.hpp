#pragma once

// Experiment definitions, multi-seed runs and architecture comparisons.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "analogator/corpus.hpp"
#include "analogator/figure_ground.hpp"
#include "analogator/network.hpp"
#include "analogator/pca.hpp"
#include "analogator/stats.hpp"

namespace analogator {

enum class CorpusKind { LetterPart, VarPos, Rotation, Oddity, OddityRandom, Twist, HintonAnalogies, CrossDomain, HintonFacts };

const char* corpus_kind_name(CorpusKind k);

struct ExperimentSpec {
    std::string id;
    CorpusKind corpus = CorpusKind::LetterPart;
    Hyperparameters hyper;
    TrainOptions stop;
    ScoreMode scoring = ScoreMode::Rounded;
    bool feedForward = false;
    std::size_t nSeeds = 1;
    std::uint64_t seed = 1;        // seeds are seed, seed + 1, ...
    std::uint64_t corpusSeed = 1;  // one corpus shared by every seed

    std::size_t letters = 30;
    std::size_t targetsPerSource = 3;
    std::size_t samples = 0;
    std::size_t testCount = 0;
    bool hints = false;
    bool singleBridge = false;        // 3b ablation topology
    bool includeIntraFamily = false;
    std::size_t hidden = 12;          // hidden units of the relation-input baseline
    bool expectNonConvergence = false;
    std::string reference;            // published figures for comparison lines

    std::vector<std::uint64_t> seeds() const;
    /// Canonical `key=value` listing; its FNV-1a hash is the config hash.
    std::string describe() const;
    std::uint64_t hash() const;
};

/// 1a 1b 1c 2a 2b 2c 2c-nohints 2d 3a 3b 3b-single hinton
std::vector<std::string> experiment_ids();
/// Throws std::invalid_argument for an unknown id.
ExperimentSpec experiment_spec(const std::string& id, bool paperScale = false);

/// Figure-ground corpus for the spec (not for the relation-input baseline).
Corpus build_corpus(const ExperimentSpec& spec);
FigureGroundShape network_shape(const ExperimentSpec& spec, const Corpus& corpus);
Network make_network(const ExperimentSpec& spec, const Corpus& corpus, std::uint64_t seed);

struct Evaluation {
    std::size_t exact = 0;        // pairs whose predicted TF and TG match exactly
    std::size_t total = 0;
    std::size_t bankCorrect = 0;  // argmax-correct banks (argmax scoring)
    std::size_t bankTotal = 0;
    std::size_t pixelErrors = 0;  // rounded TF/TG unit errors summed over pairs

    double accuracy() const { return total ? static_cast<double>(exact) / static_cast<double>(total) : 0.0; }
    double bank_accuracy() const {
        return bankTotal ? static_cast<double>(bankCorrect) / static_cast<double>(bankTotal) : 0.0;
    }
};

/// Evaluation-only pass over `indices`; never updates weights.
Evaluation evaluate(const Network& net, const Corpus& corpus, std::span<const std::size_t> indices, bool feedForward,
                    ScoreMode mode);

/// Expected per-bank accuracy of uniform guessing, measured by simulation.
double measured_chance(const Corpus& corpus, std::size_t repeats, std::uint64_t seed);

struct SeedOutcome {
    RunReport run;
    Evaluation test;
    bool plateau = false;
    std::uint64_t weightHashBeforeEval = 0;
    std::uint64_t weightHashAfterEval = 0;
    std::optional<Network> net;
};

SeedOutcome run_seed(const ExperimentSpec& spec, const Corpus& corpus, std::uint64_t seed, bool keepNetwork = false);

struct ExperimentReport {
    ExperimentSpec spec;
    std::uint64_t corpusHash = 0;
    std::size_t trainSize = 0;
    std::size_t testSize = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<SeedOutcome> outcomes;
    Summary epochs;
    Summary testAccuracy;
    Summary bankAccuracy;
    Summary pixelErrors;
    std::size_t converged = 0;
    std::optional<double> chance;
    std::vector<std::string> notes;

    /// Recompute the summaries from `outcomes`.
    void aggregate();
    void write(std::ostream& os) const;
};

/// Trains `spec.nSeeds` networks (up to `jobs` at once) on one corpus.
ExperimentReport run_experiment(const ExperimentSpec& spec, unsigned jobs = 1, bool keepNetworks = false);

struct ComparisonReport {
    ExperimentReport recurrent;
    ExperimentReport feedForward;
    std::vector<double> doubledEpochs;  // recurrent epochs x 2
    WelchResult epochs;                 // doubled recurrent vs feed-forward
    WelchResult pixels;

    void write(std::ostream& os) const;
};

/// Same corpus and seed list for both arms.
ComparisonReport compare_architectures(const ExperimentSpec& recurrent, const ExperimentSpec& feedForward,
                                       unsigned jobs = 1);

/// Step-1 hidden vectors of the given pairs, one point per distinct source
/// and figure. Letter pairs are labeled `brim`/`body` by the figure role;
/// other domains by `step1`.
HiddenTrace collect_step1_trace(const Network& net, const Corpus& corpus, std::span<const std::size_t> indices);

/// Relation-input baseline: person and relation in, answer set out.
ExperimentReport run_hinton_baseline(const ExperimentSpec& spec, unsigned jobs = 1);

/// Experiment 2c without hints, run to its epoch cap. Non-convergence is the
/// expected outcome and is reported in the notes.
ExperimentReport negative_result_2c_nohints(const ExperimentSpec& spec, unsigned jobs = 1);

}  // namespace analogator
