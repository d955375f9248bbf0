#include <doctest.h>

#include "analogator/config.hpp"

using namespace analogator;

TEST_CASE("empty script gives the defaults") {
    const auto c = parse_config("");
    CHECK(c.epsilon == 0.1);
    CHECK(c.bepsilon == 0.1);
    CHECK(c.momentum == 0.9);
    CHECK(c.maxrand == 0.003);
    CHECK(c.stoperr == 0.99);
    CHECK(c.given.empty());
}

TEST_CASE("gridfont-style script") {
    const char* script = R"(/* *****
gridfont.cx: settings only
*****
*/

set session e01 /* set DAT, ERR, WTS, OUT filenames */
set winner_take_all 0    /* turn winner take all off          */
set stoperr 0.99        /* stop at correct                    */
set momentum 0.9        /* set weight momentum                */
set epsilon 0.1         /* set learning rate                  */
set bepsilon 0.1        /* set learning rate of biases        */
set maxepoch 1000
set reportrate 1
set maxrand 0.003
set round_off 1         /* changes round of display only      */

set subcycle 2
set experiment 1a
)";
    const auto c = parse_config(script);
    CHECK(c.momentum == 0.9);
    CHECK(c.session == "e01");
    CHECK(c.maxepoch == 1000);
    CHECK(c.subcycle == 2);
    CHECK(c.experiment == "1a");
}

TEST_CASE("errors carry the line number") {
    try {
        parse_config("set epsilon 0.1\nset momentum nine\n");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("momentum") != std::string::npos);
    }
    try {
        parse_config("\n\nset learning_rate 0.2\n");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_config("layer input 153\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("copyafter context 0 A hidden 0 A 153\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("set subcycle 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("set stoperr 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("set shuffle yes\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("set experiment 9z\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("set epsilon\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("/* never closed\nset epsilon 0.1\n"), ConfigError);
}

TEST_CASE("comments may span lines without shifting line numbers") {
    try {
        parse_config("/* one\ntwo */\nset bogus 1\n");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("only given keys override an experiment") {
    const auto base = experiment_spec("2a");
    const auto same = apply_config(base, parse_config("set momentum 0.9\n"));
    CHECK(same.hyper.epsilon == base.hyper.epsilon);
    const auto changed = apply_config(base, parse_config("set epsilon 0.3\nset seeds 4\nset winner_take_all 1\n"));
    CHECK(changed.hyper.epsilon == 0.3);
    CHECK(changed.nSeeds == 4);
    CHECK(changed.scoring == ScoreMode::BankArgmax);
    CHECK(changed.hash() != base.hash());
}
