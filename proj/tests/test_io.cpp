// Copyright 2026 The agingsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <agingsim/io/config.hpp>
#include <agingsim/io/csv.hpp>
#include <agingsim/io/svg.hpp>

#include <catch_amalgamated.hpp>

using namespace agingsim;
using namespace agingsim::io;
using Catch::Matchers::ContainsSubstring;

namespace {

ErrorKind error_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("config: keys, comments and whitespace") {
    const auto cfg = Config::parse("# header\n  params.g = 2.6  # inline\n\nregime=quantum\r\nname = a b\n");
    CHECK(cfg.number("params.g", 0.0) == 2.6);
    CHECK(cfg.string("regime", "") == "quantum");
    CHECK(cfg.string("name", "") == "a b");
    CHECK(cfg.number("params.V", 7.0) == 7.0);
    CHECK_NOTHROW(cfg.check_known());
}

TEST_CASE("config: unknown keys are rejected") {
    const auto cfg = Config::parse("params.g = 1\nparams.gg = 2\n");
    cfg.number("params.g");
    try {
        cfg.check_known();
        FAIL();
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConfigError);
        CHECK_THAT(e.what(), ContainsSubstring("params.gg"));
    }
    cfg.allow({"params.gg"});
    CHECK_NOTHROW(cfg.check_known());
}

TEST_CASE("config: malformed documents") {
    CHECK(error_of([] { Config::parse("params.g 2.6\n"); }) == ErrorKind::ConfigError);
    CHECK(error_of([] { Config::parse("a = 1\na = 2\n"); }) == ErrorKind::ConfigError);
    CHECK(error_of([] { Config::parse(" = 2\n"); }) == ErrorKind::ConfigError);
    CHECK(error_of([] { Config::parse("a..b = 2\n"); }) == ErrorKind::ConfigError);
    CHECK(error_of([] { Config::parse("a-b = 2\n"); }) == ErrorKind::ConfigError);
    CHECK(error_of([] { Config::load("/nonexistent/agingsim.conf"); }) == ErrorKind::ConfigError);
}

TEST_CASE("config: typed values") {
    const auto cfg = Config::parse("x = 2.5e-3\nn = 100\nbad = 1.0x\nflag = on\nlist = 0, 2.6, 3.2\nrange = 0:0.01:0.05\n");
    CHECK(cfg.number("x", 0.0) == 2.5e-3);
    CHECK(cfg.integer("n", 0) == 100);
    CHECK(error_of([&] { cfg.number("bad"); }) == ErrorKind::ConfigError);
    CHECK(error_of([&] { cfg.integer("x"); }) == ErrorKind::ConfigError);
    CHECK(*cfg.boolean("flag"));
    CHECK(*cfg.numbers("list") == std::vector<double>{0.0, 2.6, 3.2});
    const auto r = *cfg.numbers("range");
    REQUIRE(r.size() == 6);
    CHECK(r[5] == 0.05);
    CHECK(error_of([] { Config::parse("r = 1:0:2").numbers("r"); }) == ErrorKind::ConfigError);
}

TEST_CASE("csv: header, 12 significant digits, LF endings") {
    CsvWriter csv({"p", "Q"});
    csv.row({0.1, 1.0 / 3.0});
    csv.row({1e-20, 123456789012345.0});
    CHECK(csv.str() == "p,Q\n0.1,0.333333333333\n1e-20,1.23456789012e+14\n");
    CHECK(csv.str().find('\r') == std::string::npos);
}

TEST_CASE("csv: quoting and width checks") {
    CsvWriter csv({"a", "b"});
    csv.add({"x,y", "say \"hi\""});
    CHECK(csv.str() == "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
    CHECK(error_of([&] { csv.row({1.0}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("fmt uses 12 significant digits") {
    CHECK(fmt(0.640615835777) == "0.640615835777");
    CHECK(fmt(0.6406158357771234) == "0.640615835777");
    CHECK(fmt(2.0) == "2");
}

TEST_CASE("svg: line chart") {
    const std::string doc = svg::line_chart({{"g=2.6 <x>", {0, 1, 2}, {1, 0.5, 0}, {1}}}, {"Q_c", "p", "Q"});
    CHECK(doc.rfind("<svg", 0) == 0);
    CHECK_THAT(doc, ContainsSubstring("</svg>"));
    CHECK_THAT(doc, ContainsSubstring("<polyline"));
    CHECK_THAT(doc, ContainsSubstring("<path"));  // star marker
    CHECK_THAT(doc, ContainsSubstring("g=2.6 &lt;x&gt;"));
}

TEST_CASE("svg: phase portrait, heat map and bars") {
    const std::string phase = svg::line_chart({{"A", {1, 0, -1, 0, 1}, {0, 1, 0, -1, 0}, {}}}, {"", "Re", "Im"}, true);
    CHECK_THAT(phase, ContainsSubstring("<polyline"));
    const std::string heat = svg::heat_map({0, 1}, {0, 1, 2}, {0, 0.5, 1, 0.2, 0.3, std::nan("")}, {"", "g", "V"}, "Q");
    CHECK_THAT(heat, ContainsSubstring("#bbbbbb"));
    CHECK(error_of([] { svg::heat_map({0, 1}, {0}, {1.0}, {}, ""); }) == ErrorKind::InvalidArgument);
    const std::string bars = svg::grouped_bars({"0", "1"}, {{"active", {0.7, 0.3}}, {"inactive", {1.0, 0.0}}}, {});
    CHECK_THAT(bars, ContainsSubstring("inactive"));
}
