#include <doctest.h>

#include <sstream>
#include <string>

#include "jinxin/config.hpp"
#include "jinxin/errors.hpp"

using namespace jinxin;

namespace {

std::string dump(const RunConfig& c) {
    std::ostringstream os;
    write_config(os, c);
    return os.str();
}

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test.conf");
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const ParameterError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("committed defaults file matches the built-in defaults") {
    const RunConfig from_file = load_config(JINXIN_SOURCE_DIR "/config/defaults.conf");
    CHECK(dump(from_file) == dump(RunConfig{}));
}

TEST_CASE("written configuration parses back to itself") {
    RunConfig c;
    c.model.epsilon = 0.05;
    c.model.h = Nonlinearity::polynomial({0.5, -0.25});
    c.model.h.name = "polynomial";
    c.record = {0.0, 0.125, 3.0};
    c.simulate_solver = SimulateSolver::Kinetic;
    c.simulate_format = TrajectoryFormat::Both;
    c.data.kind = DataKind::ConservativeOnly;
    c.epsilon.epsilons = {0.3, 0.15};
    CHECK(dump(parse(dump(c))) == dump(c));
}

TEST_CASE("partial files keep defaults and comments are ignored") {
    const RunConfig c = parse("# comment\n[model]\nepsilon = 0.2 ; trailing\n\n[grid]\nn = 1024\n");
    CHECK(c.model.epsilon == 0.2);
    CHECK(c.grid_n == 1024);
    CHECK(c.grid_length == RunConfig{}.grid_length);
}

TEST_CASE("configuration errors name the line and key") {
    CHECK(error_of("[model]\nepsilon = 0.1\nbogus = 1\n").find("test.conf:3") != std::string::npos);
    CHECK(error_of("[model]\nbogus = 1\n").find("unknown key 'bogus'") != std::string::npos);
    CHECK(error_of("[nope]\n").find("unknown section") != std::string::npos);
    CHECK(error_of("[grid]\nn = abc\n").find("grid.n") != std::string::npos);
    CHECK(error_of("[grid]\nn = 1000\n").find("power of two") != std::string::npos);
    CHECK(error_of("epsilon = 0.1\n").find("outside a section") != std::string::npos);
    CHECK(error_of("[model]\nepsilon = 0.1\nepsilon = 0.2\n").find("duplicate") != std::string::npos);
    CHECK(error_of("[model]\nepsilon = -1\n").find("epsilon") != std::string::npos);
    CHECK(error_of("[simulate]\nsolver = rk4\n").find("cd|bgk|parabolic") != std::string::npos);
    CHECK(error_of("[solver]\ndealias = maybe\n").find("true/false") != std::string::npos);
    CHECK(error_of("[solver]\nrecord = 1, 9\n").find("beyond t_final") != std::string::npos);
    CHECK(error_of("[model]\nnonlinearity = quadratic\nh_coeffs = 1, 2\n").find("exactly one") != std::string::npos);
}

TEST_CASE("nonlinearity none clears the default coefficient") {
    const RunConfig c = parse("[model]\nnonlinearity = none\n");
    CHECK(c.model.h.is_zero());
    CHECK(c.model.h.coeffs.empty());
    CHECK_FALSE(error_of("[model]\nnonlinearity = none\nh_coeffs = 0.3\n").empty());
}

TEST_CASE("derived solver configuration") {
    RunConfig c;
    CHECK(c.solver().dt == doctest::Approx(default_time_step(c.model, c.grid())));
    c.dt = 0.02;
    CHECK(c.solver().dt == 0.02);
    CHECK(c.epsilon_grid().size() == 4096);
    c.epsilon_grid_n = 0;
    c.epsilon_grid_length = 0.0;
    CHECK(c.epsilon_grid() == c.grid());
}
