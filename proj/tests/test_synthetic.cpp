#include <doctest.h>

#include <cmath>

#include "drt/copula.hpp"
#include "drt/error.hpp"
#include "drt/synthetic.hpp"

using namespace drt;

namespace {

SyntheticSpec flat_spec(double rho, std::uint64_t seed) {
    SyntheticSpec s;
    s.n_locations = 3;
    s.dates = {Date{2018, 1, 1}, Date{2018, 3, 24}};  // 2016 lags
    s.tod_profile.assign(24, 1.0);
    s.dow_profile.assign(7, 1.0);
    s.exam_multiplier = 1.0;
    s.pair_scales.assign(6, 1.0);
    s.base_rate = 400.0;  // rounding barely matters at this level
    s.dispersion = 1.0;
    s.rho = rho;
    s.seed = seed;
    return s;
}

std::map<ODPair, Series> as_series(const CountTable& t) {
    std::map<ODPair, Series> out;
    for (const auto& [p, s] : t.series) out[p] = to_series(s);
    return out;
}

}  // namespace

TEST_CASE("synthetic counts: shape, labels, determinism") {
    SyntheticSpec s;
    s.n_locations = 4;
    s.dates = {Date{2018, 1, 1}, Date{2018, 1, 3}};
    s.seed = 11;
    const auto a = generate_synthetic(s);
    CHECK(a.labels == std::vector<std::string>{"L1", "L2", "L3", "L4"});
    CHECK(a.series.size() == 12);
    for (const auto& [p, series] : a.series) {
        CHECK(series.size() == 72);
        for (const auto& o : series.observations) CHECK(o.count >= 0);
    }
    CHECK(generate_synthetic(s) == a);
    s.seed = 12;
    CHECK_FALSE(generate_synthetic(s) == a);
}

TEST_CASE("synthetic counts without noise are rounded means") {
    SyntheticSpec s;
    s.n_locations = 3;
    s.dates = {Date{2017, 12, 4}, Date{2017, 12, 12}};  // straddles the exam start
    s.dispersion = 0.0;
    s.seed = 3;
    s.pair_scales = {0.5, 1, 1.5, 2, 0.8, 1.2};
    const auto t = generate_synthetic(s);
    std::size_t i = 0;
    for (const auto& [p, series] : t.series) {
        for (const auto& o : series.observations) {
            CHECK(o.count == std::llround(synthetic_mean(s, i, s.pair_scales[i], o.stamp)));
        }
        ++i;
    }
    const HourStamp before = HourStamp::from(Date{2017, 12, 7}, 9);  // Thursday
    const HourStamp during = HourStamp::from(Date{2017, 12, 14}, 9);  // Thursday
    CHECK(synthetic_mean(s, 0, 1.0, during) == doctest::Approx(0.7 * synthetic_mean(s, 0, 1.0, before)));
    CHECK(synthetic_mean(s, 0, 1.0, HourStamp::from(Date{2017, 12, 10}, 9)) <
          synthetic_mean(s, 0, 1.0, HourStamp::from(Date{2017, 12, 11}, 9)));  // Sunday < Monday
}

TEST_CASE("synthetic noise correlation is recovered by the copula fit") {
    for (double rho : {0.0, 0.5, 0.9}) {
        const auto t = generate_synthetic(flat_spec(rho, 17));
        const auto cop = GaussianCopula::fit(as_series(t));
        const auto& c = cop.correlation();
        CAPTURE(rho);
        for (Eigen::Index i = 0; i < c.rows(); ++i) {
            for (Eigen::Index j = 0; j < c.cols(); ++j) {
                if (i != j) CHECK(std::abs(c(i, j) - rho) < 0.1);
            }
        }
    }
}

TEST_CASE("synthetic spec validation and JSON") {
    SyntheticSpec s;
    s.rho = 1.2;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s.rho = -0.1;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = SyntheticSpec{};
    s.tod_profile = {1, 2};
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = SyntheticSpec{};
    s.n_locations = 1;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);

    SyntheticSpec r;
    r.n_locations = 3;
    r.seed = 99;
    r.rho = 0.4;
    const auto back = parse_synthetic_spec(synthetic_spec_to_string(r));
    CHECK(back.n_locations == 3);
    CHECK(back.seed == 99);
    CHECK(back.rho == 0.4);
    CHECK(back.tod_profile == SyntheticSpec::default_tod_profile());
    CHECK(generate_synthetic(back) == generate_synthetic(r));

    CHECK_THROWS_AS(parse_synthetic_spec(R"({"rhoo": 0.3})"), ConfigError);
    try {
        parse_synthetic_spec(R"({"rho": 3})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.path()).rfind("synthetic", 0) == 0);
    }
}

TEST_CASE("default instance is valid and solvable") {
    const std::vector<std::string> labels{"L1", "L2", "L3", "L4", "L5", "L6"};
    const auto inst = default_instance(labels);
    CHECK_NOTHROW(inst.validate());
    CHECK(inst.demand_nodes.size() == 6);
    CHECK(inst.bus_stops.size() == 5);
    const Network net(inst);
    CHECK(net.routes().size() == 89);
    DemandVector d;
    for (int o = 0; o < 6; ++o)
        for (int e = 0; e < 6; ++e)
            if (o != e) d[{o, e}] = 5.0 + o + e;
    const auto design = net.solve(d);
    CHECK(design.objective > 0.0);
    CHECK(check_design(net, d, design, {}).empty());
}
