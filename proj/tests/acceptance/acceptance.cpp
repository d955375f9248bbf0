// Acceptance suite: one PASS/FAIL line per numbered criterion.
// Usage: acceptance [criterion ...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Dense>

#include "analogator/experiments.hpp"
#include "analogator/network.hpp"
#include "analogator/pca.hpp"
#include "analogator/scene.hpp"

using namespace analogator;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// 1. Backprop against central finite differences.
Outcome gradient_check() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> size(1, 6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double h = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto nIn = size(rng), nHid = size(rng), nOut = size(rng);
        Hyperparameters hyper;
        hyper.maxrand = 1.0;
        Network net(BankLayout{{"I", nIn}}, nHid, BankLayout{{"O", nOut}}, hyper);
        net.init_weights(1.0, 100 + trial);
        std::vector<double> in(nIn), desired(nOut);
        for (auto& x : in) x = unit(rng);
        for (auto& d : desired) d = unit(rng) < 0.5 ? 0.0 : 1.0;
        const auto g = net.gradient(in, desired);

        auto compare = [&](double& param, double analytic) {
            const double saved = param;
            param = saved + h;
            const double up = net.squared_error(in, desired);
            param = saved - h;
            const double down = net.squared_error(in, desired);
            param = saved;
            const double numeric = (up - down) / (2 * h);
            const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
            worst = std::max(worst, std::abs(analytic - numeric) / scale);
        };
        for (std::size_t i = 0; i < nIn; ++i)
            for (std::size_t j = 0; j < nHid; ++j) compare(net.weight_ih(i, j), g.inputHidden[j * nIn + i]);
        for (std::size_t j = 0; j < nHid; ++j)
            for (std::size_t k = 0; k < nOut; ++k) compare(net.weight_ho(j, k), g.hiddenOutput[k * nHid + j]);
        for (std::size_t j = 0; j < nHid; ++j) compare(net.hidden_bias()[j], g.hiddenBias[j]);
        for (std::size_t k = 0; k < nOut; ++k) compare(net.output_bias()[k], g.outputBias[k]);
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-4 && secs < 10.0, "max relative error " + fmt(worst) + ", " + fmt(secs, 3) + " s"};
}

// 2. decode_at recovers every object's what-vector.
Outcome binding_orthogonality() {
    const auto t0 = Clock::now();
    const auto attrs = Attributes::rgb();
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> pos(0, 5), count(1, 4);
    std::uniform_int_distribution<std::size_t> shape(0, 2), color(0, 2);
    std::size_t objects = 0, wrong = 0;
    for (int s = 0; s < 1000; ++s) {
        std::vector<SceneObject> objs;
        const int want = count(rng);
        for (int tries = 0; static_cast<int>(objs.size()) < want && tries < 200; ++tries) {
            auto o = make_object(pos(rng), pos(rng), shape(rng), color(rng), attrs);
            if (std::none_of(objs.begin(), objs.end(), [&](const SceneObject& x) { return x.overlaps(o); }))
                objs.push_back(std::move(o));
        }
        const auto scene = encode_scene(objs, 7, 7, attrs);
        for (const auto& o : objs) {
            ++objects;
            const auto got = decode_at(scene, o.where_mask(7, 7));
            if (!std::equal(got.begin(), got.end(), o.what.begin(), o.what.end(),
                            [](double a, std::uint8_t b) { return a == static_cast<double>(b); }))
                ++wrong;
        }
    }
    const double secs = seconds_since(t0);
    return {wrong == 0 && secs < 5.0,
            std::to_string(objects) + " objects, " + std::to_string(wrong) + " mismatches, " + fmt(secs, 3) + " s"};
}

ExperimentReport single_seed(const std::string& id, bool paperScale = false) {
    auto spec = experiment_spec(id, paperScale);
    spec.nSeeds = 1;
    return run_experiment(spec);
}

// 3. Experiment 2a.
Outcome rotation() {
    const auto rep = single_seed("2a");
    const auto& o = rep.outcomes.at(0);
    const bool pass = rep.testSize >= 200 && o.run.converged && o.run.curve.back() >= 100.0 &&
                      o.run.trials <= 50000 && o.test.accuracy() >= 0.99;
    return {pass, "hold-out " + std::to_string(rep.testSize) + ", trials " + std::to_string(o.run.trials) +
                      ", final train " + fmt(o.run.curve.back()) + "%, test " + std::to_string(o.test.exact) + "/" +
                      std::to_string(o.test.total)};
}

// 4. Experiment 2b at the published corpus size.
Outcome oddity() {
    const auto rep = single_seed("2b", true);
    const auto& o = rep.outcomes.at(0);
    const bool pass = rep.trainSize == 9850 && rep.testSize == 150 && o.run.trials <= 300000 &&
                      o.test.accuracy() >= 0.99;
    return {pass, "train " + std::to_string(rep.trainSize) + ", trials " + std::to_string(o.run.trials) + ", test " +
                      std::to_string(o.test.exact) + "/" + std::to_string(o.test.total)};
}

// 5. Experiment 2c with and without hint units.
Outcome twist() {
    const auto with = single_seed("2c");
    const auto& o = with.outcomes.at(0);
    auto spec = experiment_spec("2c-nohints");
    spec.nSeeds = 1;
    const auto without = negative_result_2c_nohints(spec);
    const auto& n = without.outcomes.at(0);
    const bool pass = with.testSize == 500 && o.test.accuracy() >= 0.95 && !n.run.converged &&
                      n.run.epochs == spec.stop.maxepoch;
    return {pass, "hints test " + std::to_string(o.test.exact) + "/" + std::to_string(o.test.total) +
                      "; no hints converged=" + (n.run.converged ? "yes" : "no") + " at epoch " +
                      std::to_string(n.run.epochs) + ", final train " + fmt(n.run.curve.back()) + "%"};
}

// 6. Experiment 3a.
Outcome hinton_analogies() {
    const auto rep = run_experiment(experiment_spec("3a"));
    bool allFast = true;
    std::vector<double> correct;
    std::string perSeed;
    for (const auto& o : rep.outcomes) {
        allFast = allFast && o.run.criterionEpoch && *o.run.criterionEpoch <= 1000;
        correct.push_back(static_cast<double>(o.test.exact));
        perSeed += " " + (o.run.criterionEpoch ? std::to_string(*o.run.criterionEpoch) : std::string("none")) + ":" +
                   std::to_string(o.test.exact) + "/" + std::to_string(o.test.total);
    }
    const double med = median(correct);
    return {allFast && med >= 7 && rep.testSize == 8,
            "epoch:test per seed" + perSeed + ", median " + fmt(med) + "/8"};
}

// 7. Experiment 3b and the single-bridge ablation.
Outcome cross_domain() {
    const auto rep = run_experiment(experiment_spec("3b"));
    const auto abl = run_experiment(experiment_spec("3b-single"));
    std::vector<double> acc, ablAcc;
    for (const auto& o : rep.outcomes) acc.push_back(o.test.bank_accuracy());
    for (const auto& o : abl.outcomes) ablAcc.push_back(o.test.bank_accuracy());
    const double chance = rep.chance.value_or(-1.0);
    const double med = median(acc), ablMed = median(ablAcc);
    const bool pass = med >= 0.75 && std::abs(chance - 1.0 / 36.0) < 0.01 && ablMed < 0.5;
    return {pass, "median bank accuracy " + fmt(med) + " (chance " + fmt(chance) + "), single-bridge median " +
                      fmt(ablMed)};
}

// 8. Recurrent vs feed-forward on letters.
Outcome letters() {
    const auto cmp = compare_architectures(experiment_spec("1a"), experiment_spec("1b"));
    const bool epochs = cmp.epochs.meanA < cmp.epochs.meanB && cmp.epochs.p < 0.05;
    const bool pixels = cmp.pixels.meanA < cmp.pixels.meanB && cmp.pixels.p < 0.05;
    return {epochs && pixels && cmp.recurrent.outcomes.size() >= 10,
            "doubled epochs " + fmt(cmp.epochs.meanA) + " vs " + fmt(cmp.epochs.meanB) + " p=" + fmt(cmp.epochs.p) +
                (epochs ? " ok" : " not lower") + "; pixel errors " + fmt(cmp.pixels.meanA) + " vs " +
                fmt(cmp.pixels.meanB) + " p=" + fmt(cmp.pixels.p) + (pixels ? " ok" : " not lower")};
}

// 9. PCA against Eigen, then the brim/body split on step-1 hidden states.
Outcome principal_components() {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g(0.0, 1.0);
    double worstOrth = 0.0, worstVal = 0.0, worstVec = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 30 + trial, d = 2 + trial % 7;
        Matrix pts(n, std::vector<double>(d));
        Eigen::MatrixXd X(n, d);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j) X(i, j) = pts[i][j] = g(rng) * (j + 1);
        const auto res = pca(pts);
        const Eigen::MatrixXd c = X.rowwise() - X.colwise().mean();
        const Eigen::MatrixXd cov = c.transpose() * c / (n - 1.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        for (int a = 0; a < d; ++a) {
            const int ea = d - 1 - a;  // Eigen sorts ascending
            worstVal = std::max(worstVal, std::abs(res.eigenvalues[a] - es.eigenvalues()(ea)));
            Eigen::VectorXd v = es.eigenvectors().col(ea);
            Eigen::Index big;
            v.cwiseAbs().maxCoeff(&big);
            if (v(big) < 0) v = -v;
            for (int j = 0; j < d; ++j) worstVec = std::max(worstVec, std::abs(res.components[a][j] - v(j)));
            for (int b = 0; b < d; ++b) {
                double dot = 0.0;
                for (int j = 0; j < d; ++j) dot += res.components[a][j] * res.components[b][j];
                worstOrth = std::max(worstOrth, std::abs(dot - (a == b ? 1.0 : 0.0)));
            }
        }
    }

    auto spec = experiment_spec("1a");
    const auto corpus = build_corpus(spec);
    const auto o = run_seed(spec, corpus, spec.seed, true);
    const auto trace = collect_step1_trace(*o.net, corpus, corpus.trainIdx);
    std::vector<int> labels;
    for (const auto& l : trace.labels) labels.push_back(l == "brim" ? 1 : 0);
    const auto sep = separation_check(pca(trace.points).projections, labels, 1);

    const bool pass = worstOrth < 1e-8 && worstVal < 1e-8 && worstVec < 1e-8 && sep.accuracy >= 0.9;
    return {pass, "orthonormality " + fmt(worstOrth, 3) + ", eigenvalue " + fmt(worstVal, 3) + ", eigenvector " +
                      fmt(worstVec, 3) + "; PC1 separation " + fmt(sep.accuracy) + " over " +
                      std::to_string(trace.points.size()) + " points"};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 10. Two CLI runs give byte-identical outputs.
Outcome determinism() {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / ("analogator-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::vector<std::string> reports, weights;
    for (int run = 0; run < 2; ++run) {
        const auto r = dir / ("report" + std::to_string(run) + ".txt");
        const auto w = dir / ("weights" + std::to_string(run) + ".wts");
        const std::string cmd = std::string("\"") + ANALOGATOR_CLI + "\" train 2a --seed 7 -o \"" + r.string() +
                                "\" -w \"" + w.string() + "\" > /dev/null";
        if (std::system(cmd.c_str()) != 0) {
            fs::remove_all(dir);
            return {false, "CLI run failed: " + cmd};
        }
        reports.push_back(slurp(r));
        weights.push_back(slurp(w));
    }
    fs::remove_all(dir);
    const bool pass = !reports[0].empty() && !weights[0].empty() && reports[0] == reports[1] &&
                      weights[0] == weights[1];
    return {pass, "report " + std::to_string(reports[0].size()) + " bytes, weights " +
                      std::to_string(weights[0].size()) + " bytes, " + (pass ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"gradient correctness", gradient_check},
        {"binding orthogonality", binding_orthogonality},
        {"experiment 2a", rotation},
        {"experiment 2b", oddity},
        {"experiment 2c", twist},
        {"experiment 3a", hinton_analogies},
        {"experiment 3b", cross_domain},
        {"experiments 1a/1b", letters},
        {"pca", principal_components},
        {"determinism", determinism},
    };
    std::set<std::size_t> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::stoul(argv[i]));

    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        if (!selected.empty() && !selected.count(k + 1)) continue;
        const auto t0 = Clock::now();
        Outcome out;
        try {
            out = criteria[k].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        if (!out.pass) ++failures;
        std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << " (" << criteria[k].first
                  << "): " << out.detail << " [" << fmt(seconds_since(t0), 3) << " s]" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
