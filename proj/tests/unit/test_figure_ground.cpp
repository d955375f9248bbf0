#include <doctest.h>

#include <sstream>

#include "analogator/corpus.hpp"
#include "analogator/figure_ground.hpp"

using namespace analogator;

namespace {

Corpus tiny_rotation() { return gen_rotation(1, 20, 120); }

Network tiny_net(const Corpus& c, std::uint64_t seed = 3) {
    Hyperparameters h;
    h.seed = seed;
    h.epsilon = h.bepsilon = 0.05;
    return make_analogator_network(c.shape, h);
}

}  // namespace

TEST_CASE("banks of the recurrent and feed-forward nets") {
    const auto c = tiny_rotation();
    const auto srn = tiny_net(c);
    CHECK(srn.input_banks().at("S").size == 294);
    CHECK(srn.input_banks().at("C").size == 49);
    CHECK(srn.hidden_size() == srn.input_banks().at("C").size);
    CHECK(srn.output_banks().at("F").size == 49);
    CHECK(srn.output_banks().at("G").size == 49);
    const auto ff = make_feedforward_network(c.shape, {});
    CHECK(ff.input_banks().at("SF").size == 49);
    CHECK(ff.input_banks().at("T").size == 294);
}

TEST_CASE("figure and ground partition the occupied cells") {
    const auto c = tiny_rotation();
    for (const auto& p : c.pairs) {
        for (std::size_t k = 0; k < p.targetFigure.size(); ++k) CHECK(p.targetFigure[k] + p.targetGround[k] <= 1.0);
        CHECK(step2_desired(p).size() == 98);
        CHECK(step1_desired(p).front() == p.sourceFigure.front());
    }
}

TEST_CASE("step 2 sees the step-1 forward-pass hidden pattern") {
    const auto c = tiny_rotation();
    auto net = tiny_net(c);
    const auto& p = c.pairs[0];
    std::vector<double> in1(p.source);
    in1.insert(in1.end(), p.sourceFigureMask.begin(), p.sourceFigureMask.end());
    const auto before = net.forward(in1).hidden;
    const auto s1 = train_step1(net, p);
    CHECK(s1.hidden == before);  // recorded before the update
    auto copy = net;
    const auto s2 = train_step2(net, p, s1.hidden);
    std::vector<double> in2(p.target);
    in2.insert(in2.end(), s1.hidden.begin(), s1.hidden.end());
    CHECK(s2.output == copy.forward(in2).output);
    CHECK_THROWS(train_step2(net, p, std::vector<double>(3, 0.0)));
}

TEST_CASE("inference is the two-step forward pass") {
    const auto c = tiny_rotation();
    const auto net = tiny_net(c);
    const auto& p = c.pairs[5];
    const auto inf = infer(net, p);
    std::vector<double> in1(p.source);
    in1.insert(in1.end(), p.sourceFigureMask.begin(), p.sourceFigureMask.end());
    const auto h1 = net.forward(in1).hidden;
    std::vector<double> in2(p.target);
    in2.insert(in2.end(), h1.begin(), h1.end());
    CHECK(inf.step2.output == net.forward(in2).output);
    CHECK(inf.figure.size() == 49);
    const auto zeroed = infer(net, p, ScoreMode::Rounded, true);
    CHECK(zeroed.step1.hidden == inf.step1.hidden);
}

TEST_CASE("epoch percent counts both steps") {
    const auto c = tiny_rotation();
    auto net = tiny_net(c);
    const auto rep = train_epoch(net, c.pairs, c.trainIdx);
    CHECK(rep.trials == c.trainIdx.size());
    CHECK(rep.totalUnits == c.trainIdx.size() * 2 * 98);
    CHECK(rep.percentCorrect == doctest::Approx(static_cast<double>(rep.correctUnits) / rep.totalUnits));
}

TEST_CASE("training is deterministic for a seed") {
    const auto c = tiny_rotation();
    TrainOptions opt;
    opt.maxepoch = 3;
    auto a = tiny_net(c), b = tiny_net(c);
    const auto ra = train_until(a, c.pairs, c.trainIdx, opt);
    const auto rb = train_until(b, c.pairs, c.trainIdx, opt);
    CHECK(ra.curve == rb.curve);
    CHECK(a.weight_hash() == b.weight_hash());
    auto other = tiny_net(c, 4);
    train_until(other, c.pairs, c.trainIdx, opt);
    CHECK(other.weight_hash() != a.weight_hash());
}

TEST_CASE("stopping rules") {
    const auto c = tiny_rotation();
    auto net = tiny_net(c);
    TrainOptions opt;
    opt.stoperr = 0.0;  // met after the first epoch
    opt.minepoch = 4;
    const auto r = train_until(net, c.pairs, c.trainIdx, opt);
    CHECK(r.converged);
    CHECK(r.criterionEpoch == 1);
    CHECK(r.epochs == 4);

    auto capped = tiny_net(c);
    TrainOptions budget;
    budget.stoperr = 1.0;
    budget.maxtrials = 2 * c.trainIdx.size() + 1;
    const auto rb = train_until(capped, c.pairs, c.trainIdx, budget);
    CHECK(rb.trials == 2 * c.trainIdx.size());
    CHECK(rb.failure == "trial budget reached");

    auto none = tiny_net(c);
    TrainOptions zero;
    zero.maxepoch = 0;
    const auto rz = train_until(none, c.pairs, c.trainIdx, zero);
    CHECK_FALSE(rz.converged);
    CHECK(rz.epochs == 0);
}

TEST_CASE("batch mode applies one update per epoch") {
    const auto c = tiny_rotation();
    Hyperparameters h;
    h.batch = true;
    h.seed = 2;
    auto net = make_analogator_network(c.shape, h);
    const auto before = net.weight_hash();
    const std::vector<std::size_t> one{c.trainIdx[0]};
    train_epoch(net, c.pairs, one);
    CHECK(net.weight_hash() != before);
}

TEST_CASE("run report text") {
    RunReport r;
    r.seed = 4;
    r.curve = {50.0, 99.5};
    r.epochs = 2;
    r.trials = 20;
    r.converged = true;
    r.criterionEpoch = 2;
    std::ostringstream os;
    r.write(os, "unit");
    const auto text = os.str();
    CHECK(text.rfind("# unit\n", 0) == 0);
    CHECK(text.find("epoch 2 percent 99.5\n") != std::string::npos);
    CHECK(text.find("epochs_to_criterion 2\n") != std::string::npos);
}

TEST_CASE("feed-forward baseline trains on the target answer only") {
    const auto c = tiny_rotation();
    Hyperparameters h;
    h.seed = 1;
    h.epsilon = h.bepsilon = 0.05;
    auto ff = make_feedforward_network(c.shape, h);
    const auto rep = train_ff_epoch(ff, c.pairs, c.trainIdx);
    CHECK(rep.totalUnits == c.trainIdx.size() * 98);
    const auto inf = infer_ff(ff, c.pairs[0]);
    CHECK(inf.figure.size() == 49);
}
