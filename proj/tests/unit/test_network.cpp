#include <doctest.h>

#include <cmath>
#include <sstream>

#include "analogator/network.hpp"
#include "analogator/util.hpp"

using namespace analogator;

namespace {

Network small_net(std::uint64_t seed, double maxrand = 0.5) {
    Hyperparameters h;
    h.seed = seed;
    h.maxrand = maxrand;
    Network net(BankLayout{{"A", 3}, {"B", 2}}, 4, BankLayout{{"F", 2}, {"G", 1}}, h);
    net.init_weights();
    return net;
}

}  // namespace

TEST_CASE("logistic at one") {
    CHECK(logistic(1.0) == doctest::Approx(0.7310585786).epsilon(1e-10));
    CHECK(logistic(0.0) == doctest::Approx(0.5));
    CHECK(logistic(-1.0) == doctest::Approx(1.0 - 0.7310585786).epsilon(1e-10));
}

TEST_CASE("net input is the weighted sum plus bias") {
    const double a[] = {1.0, 0.5, 0.0};
    const double w[] = {0.2, -0.4, 9.0};
    CHECK(net_input(a, w, 0.3) == doctest::Approx(0.2 - 0.2 + 0.3));
}

TEST_CASE("rounding is half up") {
    CHECK(round_activation(0.5) == 1);
    CHECK(round_activation(0.4999999) == 0);
    CHECK(round_activation(0.99) == 1);
}

TEST_CASE("bank layout offsets") {
    BankLayout b{{"S", 153}, {"C", 153}};
    CHECK(b.total() == 306);
    CHECK(b.at("C").offset == 153);
    CHECK_THROWS(b.at("X"));
}

TEST_CASE("weights start inside maxrand") {
    Hyperparameters h;
    h.seed = 3;
    Network net(BankLayout{{"S", 10}}, 5, BankLayout{{"F", 4}}, h);
    net.init_weights();
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(net.weight_ih(i, k)) < 0.003);
    for (double b : net.hidden_bias()) CHECK(std::abs(b) < 0.003);
}

TEST_CASE("gradient matches central finite differences") {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        auto net = small_net(100 + trial);
        std::vector<double> x(5), d(3);
        for (auto& v : x) v = rng.uniform();
        for (auto& v : d) v = rng.below(2);
        const auto g = net.gradient(x, d);
        const double h = 1e-6;
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t k = 0; k < 4; ++k) {
                auto& w = net.weight_ih(i, k);
                const double keep = w;
                w = keep + h;
                const double up = net.squared_error(x, d);
                w = keep - h;
                const double down = net.squared_error(x, d);
                w = keep;
                CHECK(g.inputHidden[k * 5 + i] == doctest::Approx((up - down) / (2 * h)).epsilon(1e-5));
            }
    }
}

TEST_CASE("one online trial on a 1-1-1 net matches a hand update") {
    Hyperparameters hp;
    hp.epsilon = 0.1;
    hp.bepsilon = 0.2;
    hp.momentum = 0.9;
    Network net(BankLayout{{"I", 1}}, 1, BankLayout{{"O", 1}}, hp);
    net.weight_ih(0, 0) = 0.5;
    net.weight_ho(0, 0) = -0.3;
    net.hidden_bias()[0] = 0.1;
    net.output_bias()[0] = 0.2;
    const double x = 1.0, t = 1.0;

    // hand computation
    const double h = 1.0 / (1.0 + std::exp(-(0.5 * x + 0.1)));
    const double o = 1.0 / (1.0 + std::exp(-(-0.3 * h + 0.2)));
    const double dOut = (t - o) * o * (1 - o);
    const double dHid = dOut * -0.3 * h * (1 - h);

    net.backprop_trial(std::vector<double>{x}, std::vector<double>{t});
    CHECK(net.weight_ho(0, 0) == doctest::Approx(-0.3 + 0.1 * dOut * h).epsilon(1e-12));
    CHECK(net.weight_ih(0, 0) == doctest::Approx(0.5 + 0.1 * dHid * x).epsilon(1e-12));
    CHECK(net.output_bias()[0] == doctest::Approx(0.2 + 0.2 * dOut).epsilon(1e-12));
    CHECK(net.hidden_bias()[0] == doctest::Approx(0.1 + 0.2 * dHid).epsilon(1e-12));

    // the second step carries 0.9 of the first delta
    const double firstHo = 0.1 * dOut * h;
    const double w1 = net.weight_ho(0, 0);
    const double h2 = 1.0 / (1.0 + std::exp(-(net.weight_ih(0, 0) * x + net.hidden_bias()[0])));
    const double o2 = 1.0 / (1.0 + std::exp(-(w1 * h2 + net.output_bias()[0])));
    const double dOut2 = (t - o2) * o2 * (1 - o2);
    net.backprop_trial(std::vector<double>{x}, std::vector<double>{t});
    CHECK(net.weight_ho(0, 0) == doctest::Approx(w1 + 0.1 * dOut2 * h2 + 0.9 * firstHo).epsilon(1e-12));
}

TEST_CASE("batch accumulation equals the summed online gradients") {
    auto net = small_net(5);
    const std::vector<double> x1{1, 0, 1, 0, 1}, x2{0, 1, 1, 1, 0}, d1{1, 0, 1}, d2{0, 1, 0};
    Gradient acc;
    acc.resize_like(5, 4, 3);
    acc.clear();
    net.accumulate_trial(x1, d1, acc);
    net.accumulate_trial(x2, d2, acc);
    const auto g1 = net.gradient(x1, d1), g2 = net.gradient(x2, d2);
    for (std::size_t k = 0; k < acc.inputHidden.size(); ++k)
        CHECK(acc.inputHidden[k] == doctest::Approx(g1.inputHidden[k] + g2.inputHidden[k]));
}

TEST_CASE("snapshot round trip is exact") {
    auto net = small_net(9);
    std::stringstream ss;
    net.write_snapshot(ss, 9, "unit");
    std::uint64_t seed = 0;
    std::string comment;
    const auto back = Network::read_snapshot(ss, net.input_banks(), net.output_banks(), {}, &seed, &comment);
    CHECK(seed == 9);
    CHECK(comment == "unit");
    CHECK(back.weight_hash() == net.weight_hash());
}

TEST_CASE("argmax scoring counts banks") {
    BankLayout banks{{"F", 3}, {"G", 3}};
    const std::vector<double> actual{0.1, 0.7, 0.2, 0.4, 0.3, 0.35};
    const std::vector<double> desired{0, 1, 0, 0, 0, 1};
    const auto s = score_outputs(actual, desired, ScoreMode::BankArgmax, &banks);
    CHECK(s.total == 2);
    CHECK(s.correct == 1);
    CHECK_FALSE(s.exact);
    const auto r = score_outputs(actual, desired, ScoreMode::Rounded);
    CHECK(r.total == 6);
    CHECK(r.correct == 5);
}

TEST_CASE("hyperparameter validation") {
    Hyperparameters h;
    h.momentum = 1.0;
    CHECK_THROWS_AS(h.validate(), std::invalid_argument);
}
