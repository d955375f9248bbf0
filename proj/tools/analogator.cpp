#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "analogator/config.hpp"
#include "analogator/corpus.hpp"
#include "analogator/experiments.hpp"
#include "analogator/pca.hpp"
#include "analogator/render.hpp"
#include "analogator/util.hpp"

using namespace analogator;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNoConvergence = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    return out;
}

// Writes to `path`, or to stdout when it is empty or "-".
template <typename Fn>
void emit(const std::string& path, Fn fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    auto out = open_out(path);
    fn(out);
}

struct Common {
    std::string target;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> seeds;
    unsigned jobs = 1;
    bool paperScale = false;
    std::vector<std::string> settings;
};

void add_common(CLI::App* cmd, Common& c, bool withSeeds) {
    cmd->add_option("--seed", c.seed, "Network seed (also the corpus seed)");
    if (withSeeds) {
        cmd->add_option("--seeds", c.seeds, "Number of seeds");
        cmd->add_option("--jobs", c.jobs, "Seeds trained concurrently")->check(CLI::PositiveNumber);
    }
    cmd->add_flag("--paper-scale", c.paperScale, "Use the full corpus sizes");
    cmd->add_option("--set", c.settings, "Override a setting, name=value (repeatable)");
}

// An experiment id or a `set ...` script naming one.
ExperimentSpec resolve_spec(const Common& c) {
    Config config;
    std::string id = c.target;
    const auto ids = experiment_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
        std::string text;
        try {
            text = read_file(c.target);
        } catch (const DataError&) {
            throw UsageError("'" + c.target + "' is neither an experiment id nor a readable config file");
        }
        try {
            config = parse_config(text);
        } catch (const ConfigError& e) {
            throw DataError(c.target + ": " + e.what());
        }
        if (!config.experiment) throw DataError(c.target + ": no 'set experiment <id>' line");
        id = *config.experiment;
    }
    for (const auto& kv : c.settings) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects name=value, got '" + kv + "'");
        try {
            set_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw UsageError(std::string("--set: ") + e.what());
        }
    }
    auto spec = apply_config(experiment_spec(id, c.paperScale), config);
    if (c.seed) {
        spec.seed = *c.seed;
        spec.corpusSeed = *c.seed;
    }
    if (c.seeds) spec.nSeeds = *c.seeds;
    return spec;
}

std::string header(const std::string& what, const ExperimentSpec& spec, std::uint64_t seed) {
    return std::string(kToolVersion) + " " + what + " " + spec.id + " seed " + std::to_string(seed) + " config " +
           hex64(spec.hash());
}

// Bank layouts of a saved network, recognized from its input width.
Network load_network(const std::string& path, const FigureGroundShape& shape, bool& feedForward, std::uint64_t& seed,
                     std::string& comment) {
    std::istringstream in(read_file(path));
    std::string first;
    std::getline(in, first);
    const auto head = split_ws(first);
    if (head.size() != 5 || head[0] != "WTS") throw DataError(path + ": not a weight snapshot");
    const auto width = static_cast<std::size_t>(parse_integer(head[1]));
    Hyperparameters hyper;
    const auto srn = make_analogator_network(shape, hyper);
    const auto ff = make_feedforward_network(shape, hyper);
    if (width == srn.input_size()) {
        feedForward = false;
    } else if (width == ff.input_size()) {
        feedForward = true;
    } else {
        throw DataError(path + ": input width " + std::to_string(width) + " does not fit the corpus");
    }
    const auto& tmpl = feedForward ? ff : srn;
    std::istringstream again(read_file(path));
    try {
        return Network::read_snapshot(again, tmpl.input_banks(), tmpl.output_banks(), hyper, &seed, &comment);
    } catch (const std::runtime_error& e) {
        throw DataError(path + ": " + e.what());
    }
}

Corpus load_corpus(const std::string& path) {
    std::istringstream in(read_file(path));
    try {
        return read_corpus(in);
    } catch (const std::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

// ------------------------------------------------------------------ gen

int cmd_gen(const Common& c, const std::string& out) {
    const auto spec = resolve_spec(c);
    if (spec.corpus == CorpusKind::HintonFacts) throw UsageError("the relation-input baseline has no pair corpus");
    const auto corpus = build_corpus(spec);
    emit(out, [&](std::ostream& os) {
        write_corpus(os, corpus, header("gen", spec, spec.corpusSeed) + " corpus " + hex64(corpus.hash()));
    });
    std::cerr << "corpus " << spec.id << ": " << corpus.size() << " pairs (" << corpus.trainIdx.size() << " train, "
              << corpus.testIdx.size() << " test)\n";
    return kOk;
}

// ---------------------------------------------------------------- train

struct TrainPaths {
    std::string report, weights, corpus, trace;
    bool requireConvergence = false;
};

int cmd_train(const Common& c, const TrainPaths& p) {
    auto spec = resolve_spec(c);
    const std::uint64_t seed = spec.seed;
    if (spec.corpus == CorpusKind::HintonFacts) {
        spec.nSeeds = 1;
        const auto rep = run_hinton_baseline(spec, 1);
        const auto& run = rep.outcomes.front().run;
        emit(p.report, [&](std::ostream& os) { run.write(os, header("train", spec, seed)); });
        if (!p.weights.empty()) std::cerr << "note: the relation-input baseline does not save weights\n";
        return p.requireConvergence && !run.converged ? kNoConvergence : kOk;
    }
    const auto corpus = build_corpus(spec);
    if (!p.corpus.empty()) {
        emit(p.corpus, [&](std::ostream& os) {
            write_corpus(os, corpus, header("train", spec, seed) + " corpus " + hex64(corpus.hash()));
        });
    }
    auto outcome = run_seed(spec, corpus, seed, true);
    const auto tag = header("train", spec, seed) + " corpus " + hex64(corpus.hash());
    emit(p.report, [&](std::ostream& os) { outcome.run.write(os, tag); });
    if (!p.weights.empty()) {
        emit(p.weights, [&](std::ostream& os) {
            outcome.net->write_snapshot(os, seed, tag + " arch " + outcome.run.architecture);
        });
    }
    if (!p.trace.empty()) {
        if (spec.feedForward) throw UsageError("--trace needs the recurrent architecture");
        const auto trace = collect_step1_trace(*outcome.net, corpus, corpus.trainIdx);
        emit(p.trace, [&](std::ostream& os) { write_trace(os, trace, tag + " step1 hidden"); });
    }
    std::cerr << spec.id << " seed " << seed << ": " << outcome.run.epochs << " epochs, "
              << (outcome.run.converged ? "converged" : "not converged") << ", test " << outcome.test.exact << '/'
              << outcome.test.total << '\n';
    if (p.requireConvergence && !outcome.run.converged) {
        std::cerr << "error: training did not reach stoperr (" << outcome.run.failure << ")\n";
        return kNoConvergence;
    }
    return kOk;
}

// ------------------------------------------------------------------ run

int cmd_run(const Common& c, const std::string& out, bool requireConvergence) {
    const auto spec = resolve_spec(c);
    ExperimentReport rep;
    if (spec.id == "2c-nohints") {
        rep = negative_result_2c_nohints(spec, c.jobs);
    } else {
        rep = run_experiment(spec, c.jobs);
    }
    emit(out, [&](std::ostream& os) { rep.write(os); });
    if (requireConvergence && rep.converged != rep.outcomes.size()) {
        std::cerr << "error: " << rep.outcomes.size() - rep.converged << " of " << rep.outcomes.size()
                  << " runs did not converge\n";
        return kNoConvergence;
    }
    return kOk;
}

// ----------------------------------------------------------------- eval

int cmd_eval(const std::string& weights, const std::string& corpusPath, const std::string& which,
             const std::string& scoring) {
    const auto corpus = load_corpus(corpusPath);
    bool ff = false;
    std::uint64_t seed = 0;
    std::string comment;
    const auto net = load_network(weights, corpus.shape, ff, seed, comment);
    ScoreMode mode = corpus.domain == Domain::Family ? ScoreMode::BankArgmax : ScoreMode::Rounded;
    if (scoring == "rounded") mode = ScoreMode::Rounded;
    if (scoring == "argmax") mode = ScoreMode::BankArgmax;
    const auto& idx = which == "train" ? corpus.trainIdx : which == "all" ? std::vector<std::size_t>{} : corpus.testIdx;
    std::vector<std::size_t> all;
    if (which == "all")
        for (std::size_t i = 0; i < corpus.size(); ++i) all.push_back(i);
    const auto ev = evaluate(net, corpus, which == "all" ? std::span<const std::size_t>(all) : idx, ff, mode);
    std::cout << "# " << kToolVersion << " eval seed " << seed << " corpus " << hex64(corpus.hash()) << '\n';
    if (!comment.empty()) std::cout << "# weights: " << comment << '\n';
    std::cout << "architecture " << (ff ? "ff" : "srn") << '\n';
    std::cout << "scoring " << (mode == ScoreMode::Rounded ? "rounded" : "argmax") << '\n';
    std::cout << which << "_exact " << ev.exact << ' ' << ev.total << '\n';
    if (mode == ScoreMode::BankArgmax) std::cout << "bank_correct " << ev.bankCorrect << ' ' << ev.bankTotal << '\n';
    std::cout << "pixel_errors " << ev.pixelErrors << '\n';
    return kOk;
}

// -------------------------------------------------------------- analyze

int cmd_analyze(const std::string& tracePath, std::size_t components, const std::string& out) {
    HiddenTrace trace;
    {
        std::istringstream in(read_file(tracePath));
        try {
            trace = read_trace(in);
        } catch (const std::exception& e) {
            throw DataError(tracePath + ": " + e.what());
        }
    }
    if (trace.points.size() < 2) throw DataError(tracePath + ": PCA needs at least two points");
    const auto result = pca(trace.points);
    components = std::min(components, result.components.size());
    const std::string tag = std::string(kToolVersion) + " analyze " + tracePath + " points " +
                            std::to_string(trace.points.size()) + " hash " +
                            hex64(fnv1a(read_file(tracePath)));
    emit(out, [&](std::ostream& os) { write_projections(os, trace, result, components, tag); });
    std::cerr << "eigenvalues";
    for (std::size_t k = 0; k < std::min<std::size_t>(5, result.eigenvalues.size()); ++k)
        std::cerr << ' ' << format_real(result.eigenvalues[k]);
    std::cerr << (result.degenerate ? " (degenerate)" : "") << '\n';
    // separation report when the labels form exactly two classes
    std::vector<std::string> classes;
    for (const auto& l : trace.labels)
        if (std::find(classes.begin(), classes.end(), l) == classes.end()) classes.push_back(l);
    if (classes.size() == 2) {
        std::vector<int> labels;
        for (const auto& l : trace.labels) labels.push_back(l == classes[1]);
        const auto sep = separation_check(result.projections, labels, 1);
        std::cerr << "pc1 separation of " << classes[0] << '/' << classes[1] << ": accuracy "
                  << format_real(sep.accuracy) << " threshold " << format_real(sep.threshold) << '\n';
    }
    return kOk;
}

// --------------------------------------------------------------- render

Grid panel(const Corpus& corpus, std::span<const double> values, bool scene) {
    switch (corpus.domain) {
        case Domain::Letter: return make_grid(kLetterRows, kLetterCols, values);
        case Domain::Geometric:
            if (scene) return scene_grid(values, kGeoGrid, kGeoGrid, values.size() / (kGeoGrid * kGeoGrid));
            return make_grid(kGeoGrid, kGeoGrid, values);
        case Domain::Family: return make_grid(1, values.size(), values);
    }
    throw std::logic_error("unknown domain");
}

Grid square_grid(std::span<const double> v) {
    std::size_t cols = 1;
    while (cols * cols < v.size()) ++cols;
    std::vector<double> padded(v.begin(), v.end());
    padded.resize(((v.size() + cols - 1) / cols) * cols, 0.0);
    return make_grid(padded.size() / cols, cols, padded);
}

int cmd_render(const std::string& source, std::size_t index, const std::string& corpusPath, const std::string& out,
               const std::string& textOut) {
    Grid grid;
    std::string tag;
    const auto text = read_file(source);
    if (text.rfind("TRACE", 0) == 0) {
        std::istringstream in(text);
        const auto trace = read_trace(in);
        if (index >= trace.points.size()) throw DataError("trace point " + std::to_string(index) + " out of range");
        grid = square_grid(trace.points[index]);
        tag = std::string(kToolVersion) + " render trace point " + std::to_string(index) + " label " +
              trace.labels[index] + " hash " + hex64(fnv1a(text));
    } else {
        if (corpusPath.empty()) throw UsageError("rendering weights needs --corpus");
        const auto corpus = load_corpus(corpusPath);
        if (index >= corpus.size()) throw DataError("pair " + std::to_string(index) + " out of range");
        bool ff = false;
        std::uint64_t seed = 0;
        std::string comment;
        const auto net = load_network(source, corpus.shape, ff, seed, comment);
        const auto& pair = corpus.pairs[index];
        const auto mode = corpus.domain == Domain::Family ? ScoreMode::BankArgmax : ScoreMode::Rounded;
        const auto inf = ff ? infer_ff(net, pair, mode) : infer(net, pair, mode);
        const Grid panels[] = {panel(corpus, pair.source, true), panel(corpus, pair.sourceFigureMask, false),
                               panel(corpus, pair.target, true), panel(corpus, inf.figure, false)};
        grid = join_panels(panels);
        tag = std::string(kToolVersion) + " render pair " + std::to_string(index) + " seed " + std::to_string(seed) +
              " corpus " + hex64(corpus.hash()) + " panels source source-figure target predicted-figure";
    }
    emit(out, [&](std::ostream& os) { write_pgm(os, grid, tag); });
    if (!textOut.empty()) emit(textOut, [&](std::ostream& os) { os << "# " << tag << '\n' << render_text_grid(grid); });
    return kOk;
}

// -------------------------------------------------------------- compare

int cmd_compare(const Common& c, const std::string& out) {
    if (c.target != "1b") throw UsageError("compare supports '1b' (recurrent 1a against the feed-forward 1b)");
    Common a = c;
    a.target = "1a";
    Common b = c;
    b.target = "1b";
    auto rec = resolve_spec(a);
    auto ff = resolve_spec(b);
    const auto rep = compare_architectures(rec, ff, c.jobs);
    emit(out, [&](std::ostream& os) { rep.write(os); });
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Figure-ground analogy networks: corpora, training, evaluation and analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    Common gen, train, run, compare;
    std::string genOut, runOut, compareOut;
    TrainPaths paths;
    bool runRequire = false;

    auto* g = app.add_subcommand("gen", "Write the corpus of an experiment");
    g->add_option("experiment", gen.target, "Experiment id or config file")->required();
    add_common(g, gen, false);
    g->add_option("-o,--out", genOut, "Corpus file (default stdout)");

    auto* t = app.add_subcommand("train", "Train one network; write its run report and weights");
    t->add_option("experiment", train.target, "Experiment id or config file")->required();
    add_common(t, train, false);
    t->add_option("-o,--report", paths.report, "Run report (default stdout)");
    t->add_option("-w,--weights", paths.weights, "Weight snapshot");
    t->add_option("--corpus", paths.corpus, "Also write the corpus used");
    t->add_option("--trace", paths.trace, "Step-1 hidden trace over the training pairs");
    t->add_flag("--require-convergence", paths.requireConvergence, "Exit 3 unless stoperr is reached");

    auto* r = app.add_subcommand("run", "Run every seed of an experiment and write the aggregate report");
    r->add_option("experiment", run.target, "Experiment id or config file")->required();
    add_common(r, run, true);
    r->add_option("-o,--out", runOut, "Experiment report (default stdout)");
    r->add_flag("--require-convergence", runRequire, "Exit 3 unless every seed converges");

    std::string evalWeights, evalCorpus, evalWhich = "test", evalScoring = "auto";
    auto* e = app.add_subcommand("eval", "Score a saved network on a corpus");
    e->add_option("weights", evalWeights, "Weight snapshot")->required();
    e->add_option("corpus", evalCorpus, "Corpus file")->required();
    e->add_option("--pairs", evalWhich, "test, train or all")->check(CLI::IsMember({"test", "train", "all"}));
    e->add_option("--scoring", evalScoring, "auto, rounded or argmax")
        ->check(CLI::IsMember({"auto", "rounded", "argmax"}));

    std::string traceIn, projOut;
    std::size_t components = 3;
    auto* a = app.add_subcommand("analyze", "PCA of a hidden trace; writes label,pc1,... projections");
    a->add_option("trace", traceIn, "Trace file")->required();
    a->add_option("-k,--components", components, "Components to export")->check(CLI::PositiveNumber);
    a->add_option("-o,--out", projOut, "Projection file (default stdout)");

    std::string renderSrc, renderCorpus, renderOut, renderText;
    std::size_t renderIndex = 0;
    auto* v = app.add_subcommand("render", "PGM of a pair (source, source figure, target, predicted figure) or a trace point");
    v->add_option("source", renderSrc, "Weight snapshot or trace file")->required();
    v->add_option("index", renderIndex, "Pair or trace point index")->required();
    v->add_option("--corpus", renderCorpus, "Corpus file (weights only)");
    v->add_option("-o,--out", renderOut, "PGM file (default stdout)");
    v->add_option("--text", renderText, "Also write the values as a text grid");

    auto* c = app.add_subcommand("compare", "Recurrent against feed-forward architecture comparison");
    c->add_option("experiment", compare.target, "Comparison id (1b)")->required();
    add_common(c, compare, true);
    c->add_option("-o,--out", compareOut, "Comparison report (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*g) return cmd_gen(gen, genOut);
        if (*t) return cmd_train(train, paths);
        if (*r) return cmd_run(run, runOut, runRequire);
        if (*e) return cmd_eval(evalWeights, evalCorpus, evalWhich, evalScoring);
        if (*a) return cmd_analyze(traceIn, components, projOut);
        if (*v) return cmd_render(renderSrc, renderIndex, renderCorpus, renderOut, renderText);
        if (*c) return cmd_compare(compare, compareOut);
    } catch (const UsageError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kUsage;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kData;
    }
    return kUsage;
}
