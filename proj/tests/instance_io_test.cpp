#include <gtest/gtest.h>

#include "hmbp/fixtures.hpp"
#include "hmbp/instance_io.hpp"
#include "hmbp/witness.hpp"

using namespace hmbp;

namespace {

std::string parse_error(const std::string& text) {
    try {
        parse_instance(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(InstanceFile, ParsesSixBinInstance) {
    const Instance inst = parse_instance("d: 6\nw: 5 5 3 1 1 0\nC: 17 17 17 17 17 8\n");
    const Instance expected = fixtures::six_bin_feasible();
    EXPECT_EQ(inst.d, expected.d);
    EXPECT_EQ(inst.weights, expected.weights);
    EXPECT_EQ(inst.capacities, expected.capacities);
}

TEST(InstanceFile, AnyOrderCommentsAndCrlf) {
    const Instance inst = parse_instance("# pair\r\nC: 5 3\r\n\r\nw: 3 1\r\n  d: 2  \r\n");
    EXPECT_EQ(inst.d, 2);
    EXPECT_EQ(inst.weights.to_string(), "3 1");
    EXPECT_EQ(inst.capacities.to_string(), "5 3");
}

TEST(InstanceFile, Errors) {
    EXPECT_EQ(parse_error("w: 1 3\n"), "line 1: w not non-increasing at position 2");
    EXPECT_EQ(parse_error("d: 2\nw: 3 1\nC: 3 5\n"), "line 3: C not non-increasing at position 2");
    EXPECT_EQ(parse_error("d: 2\nd: 3\n"), "line 2: duplicate key d");
    EXPECT_EQ(parse_error("d: 2\nw: 3 1\n"), "missing key C");
    EXPECT_EQ(parse_error("d: 2\nw: 3 x\nC: 1 1\n"), "line 2: 'x' is not an integer");
    EXPECT_EQ(parse_error("d: 2\nw: 3 1\nC: 4 4 4\n"), "line 3: w has 2 entries but C has 3");
    EXPECT_EQ(parse_error("d: 0\nw: 1\nC: 1\n"), "line 1: d must be positive");
    EXPECT_EQ(parse_error("n: 4\n"), "line 1: unknown key 'n'");
    EXPECT_EQ(parse_error("d 4\n"), "line 1: expected 'key: values'");
    EXPECT_EQ(parse_error("d: 2\nw: 1 -1\nC: 1 1\n"), "line 2: w has a negative entry at position 2");
}

TEST(InstanceFile, NegativeCapacitiesAccepted) {
    const Instance inst = parse_instance("d: 2\nw: 1 0\nC: 1 -3\n");
    EXPECT_EQ(inst.capacities[1], -3);
}

TEST(InstanceFile, RenderParseRoundTrip) {
    const WitnessInstance wit = c_circle(WeightProfile({5, 5, 3, 1, 1, 0}), 6);
    const std::string text = render_instance(wit.instance, {"construction: c-circle", "claim: x"});
    EXPECT_EQ(text.substr(0, 2), "# ");
    const Instance back = parse_instance(text);
    EXPECT_EQ(back.d, wit.instance.d);
    EXPECT_EQ(back.weights, wit.instance.weights);
    EXPECT_EQ(back.capacities, wit.instance.capacities);
    EXPECT_EQ(render_instance(back), render_instance(wit.instance));
}

TEST(Report, AssignmentRendering) {
    const Instance inst = fixtures::six_bin_feasible();
    const std::string text = render_assignment(fixtures::six_bin_solution(), inst.capacities);
    EXPECT_NE(text.find("bin 1: 5^1 3^3 1^2  weight 16  capacity 17  gap 1"), std::string::npos);
    EXPECT_NE(text.find("5: 1 2 3 3 3 0"), std::string::npos);
}
