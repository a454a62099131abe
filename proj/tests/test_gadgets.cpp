#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "dpg/gadgets.hpp"
#include "dpg/graph.hpp"
#include "dpg/reduce.hpp"
#include "oracles.hpp"

using namespace dpg;

namespace {

Formula make_formula(int vars, std::vector<std::vector<int>> clauses) {
    Formula f;
    f.num_vars = vars;
    f.clauses = std::move(clauses);
    return f;
}

}  // namespace

TEST_CASE("formula validation enforces the 3-SAT-3 shape") {
    validate_formula(make_formula(3, {{1, -2, 3}, {-1, 2}, {2, -3}}));
    validate_formula(make_formula(1, {{1}}));          // unit clauses are legal input
    validate_formula(make_formula(1, {{}}));           // so are empty ones
    CHECK(throws_code(
        [] { validate_formula(make_formula(4, {{1, 2, 3, 4}})); },
        ErrorCode::NotThreeSatThree));  // too many literals
    CHECK(throws_code(
        [] { validate_formula(make_formula(2, {{1, -1, 2}})); },
        ErrorCode::NotThreeSatThree));  // repeated variable in a clause
    CHECK(throws_code(
        [] { validate_formula(make_formula(1, {{2}})); },
        ErrorCode::NotThreeSatThree));  // literal out of range
    CHECK(throws_code(
        [] { validate_formula(make_formula(2, {{1, 2}, {1}, {-1}, {1, -2}})); },
        ErrorCode::NotThreeSatThree));  // variable 1 occurs four times
}

TEST_CASE("DIMACS parsing") {
    const std::string text =
        "c a comment\n"
        "p cnf 3 2\n"
        "1 -2 3 0\n"
        "-1\n"
        "2 0\n";  // clause spanning lines
    Formula f = parse_dimacs(text);
    CHECK(f.num_vars == 3);
    REQUIRE(f.clauses.size() == 2);
    CHECK(f.clauses[0] == std::vector<int>{1, -2, 3});
    CHECK(f.clauses[1] == std::vector<int>{-1, 2});

    CHECK(throws_code([] { parse_dimacs("1 2 0\n"); }, ErrorCode::BadFormat));
    CHECK(throws_code([] { parse_dimacs("p cnf x 2\n"); }, ErrorCode::BadFormat));
    CHECK(throws_code([] { parse_dimacs("p cnf 2 1\n1 2\n"); }, ErrorCode::BadFormat));
    CHECK(throws_code([] { parse_dimacs("p cnf 2 1\n1 zz 0\n"); }, ErrorCode::BadFormat));
    CHECK(throws_code([] { parse_dimacs("p cnf 4 1\n1 2 3 4 0\n"); },
                      ErrorCode::NotThreeSatThree));
    CHECK(throws_code([] { read_dimacs_file("/nonexistent/f.cnf"); }, ErrorCode::IoError));
}

TEST_CASE("unit propagation") {
    // x1 forced true, which satisfies the second clause and shortens the third
    Formula f = make_formula(3, {{1}, {1, 2}, {-1, 2, 3}});
    UnitPropagation up = unit_propagate(f);
    CHECK(!up.contradiction);
    REQUIRE(up.forced.count(1));
    CHECK(up.forced.at(1) == true);
    REQUIRE(up.residual.clauses.size() == 1);
    CHECK(up.residual.clauses[0] == std::vector<int>{2, 3});

    // chained units ending in a contradiction
    Formula g = make_formula(2, {{1}, {-1, 2}, {-2}});
    UnitPropagation upg = unit_propagate(g);
    CHECK(upg.contradiction);

    // nothing to do
    Formula h = make_formula(2, {{1, 2}, {-1, -2}});
    UnitPropagation uph = unit_propagate(h);
    CHECK(!uph.contradiction);
    CHECK(uph.forced.empty());
    CHECK(uph.residual.clauses.size() == 2);
}

TEST_CASE("DPLL agrees with the truth-table oracle") {
    Rng rng(314);
    int sat = 0, unsat = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const int vars = 1 + static_cast<int>(rng.below(6));
        Formula f = random_3sat3(rng, vars, 1 + rng.below(9));
        const bool expected = truth_table_sat(f);
        CHECK(brute_force_sat(f) == expected);
        (expected ? sat : unsat)++;
    }
    CHECK(sat > 50);    // the generator reaches both classes
    CHECK(unsat > 50);

    Formula wide = make_formula(25, {{1, 2, 3}});
    CHECK(throws_code([&] { brute_force_sat(wide); }, ErrorCode::TooLarge));
}

TEST_CASE("the canned unsatisfiable core is a genuine 3-SAT-3 contradiction") {
    Formula core = unsat_core_formula();
    validate_formula(core);
    CHECK(!truth_table_sat(core));
    CHECK(core.num_vars <= 8);  // must stay within the removability search cap
    for (const auto& clause : core.clauses) CHECK(clause.size() == 2);
}

TEST_CASE("blockers pin vertices against removal") {
    Graph g = cycle_graph(6);
    const std::size_t d = g.degree(0);
    std::vector<VertexId> clique = attach_blocker(g, 0);
    g.validate();
    CHECK(clique.size() == d + 2);
    CHECK(g.degree(0) == 2 * d + 2);  // doubled and even

    StubGraph sg(g);
    CHECK(!removability(sg, 0).has_value());
    for (VertexId v : clique) CHECK(!removability(sg, v).has_value());
    // an untouched cycle vertex is still removable
    CHECK(removability(sg, 3).has_value());

    CHECK(throws_code([&] { attach_blocker(g, 99); }, ErrorCode::UnknownVertex));
}

TEST_CASE("paired blockers even out two odd vertices at once") {
    Graph g = path_graph(4);  // endpoints have odd degree 1
    const std::size_t d_max = std::max(g.degree(0), g.degree(3));
    std::vector<VertexId> clique = attach_blocker_pair(g, 0, 3);
    g.validate();
    CHECK(clique.size() == d_max + 2);
    CHECK(g.degree(0) % 2 == 0);
    CHECK(g.degree(3) % 2 == 0);
    StubGraph sg(g);
    CHECK(!removability(sg, 0).has_value());
    CHECK(!removability(sg, 3).has_value());
    for (VertexId v : clique) CHECK(!removability(sg, v).has_value());

    CHECK(throws_code([&] { attach_blocker_pair(g, 1, 1); }, ErrorCode::BadParams));
}

TEST_CASE("the variable gadget has exactly two removal certificates for x") {
    VariableGadget vg = variable_gadget();
    vg.graph.validate();
    CHECK(vg.graph.n() == 9);
    CHECK(vg.x == 8);
    CHECK(vg.graph.degree(vg.x) == 8);
    // ring: complement of the 8-cycle, plus the spoke to x
    for (VertexId v = 0; v < 8; ++v) CHECK(vg.graph.degree(v) == 6);
    for (std::size_t j = 0; j < 8; ++j) {
        const Edge& slot = vg.literal_edges[j];
        const Edge expected{static_cast<VertexId>(j), static_cast<VertexId>((j + 1) % 8)};
        CHECK(slot.lo() == expected.lo());
        CHECK(slot.hi() == expected.hi());
        CHECK(!vg.graph.has_edge(slot.u, slot.v));
    }

    StubGraph sg(vg.graph);
    auto certs = enumerate_certificates(sg, vg.x);
    REQUIRE(certs.size() == 2);
    // one certificate restores the even-indexed slots, the other the odd ones
    auto slot_index = [&](const Edge& e) -> int {
        for (std::size_t j = 0; j < 8; ++j)
            if (vg.literal_edges[j].lo() == e.lo() && vg.literal_edges[j].hi() == e.hi())
                return static_cast<int>(j);
        return -1;
    };
    std::set<int> parities;
    for (const auto& cert : certs) {
        std::set<int> own;
        REQUIRE(cert.restored_matching.size() == 4);
        for (const Edge& e : cert.restored_matching.edges) {
            const int j = slot_index(e);
            REQUIRE(j >= 0);
            own.insert(j % 2);
        }
        CHECK(own.size() == 1);
        parities.insert(*own.begin());
    }
    CHECK(parities.size() == 2);
}

TEST_CASE("reduction instances have the advertised shape") {
    Formula f = make_formula(3, {{1, -2, 3}, {-1, 2}, {2, -3}});
    GadgetInstance inst = build_reduction(f);
    inst.graph.validate();
    CHECK(inst.variable_vertices.size() == 3);
    CHECK(inst.clause_vertices.size() == 3);
    CHECK(inst.dummy_vertices.size() == 3);
    CHECK(inst.m_target == 6);
    CHECK(inst.graph.max_degree() <= 28);

    // every clause vertex has degree exactly 4 and a private dummy neighbor
    for (const auto& [idx, cl] : inst.clause_vertices) {
        CHECK(inst.graph.degree(cl) == 4);
        CHECK(inst.graph.has_edge(cl, inst.dummy_vertices.at(idx)));
    }

    // X and C are pairwise independent
    std::vector<VertexId> xc;
    for (const auto& [var, x] : inst.variable_vertices) xc.push_back(x);
    for (const auto& [idx, cl] : inst.clause_vertices) xc.push_back(cl);
    for (std::size_t i = 0; i < xc.size(); ++i)
        for (std::size_t j = i + 1; j < xc.size(); ++j)
            CHECK(!inst.graph.has_edge(xc[i], xc[j]));

    // literal slots survive the identifications as live non-edges: they only
    // become edges when the variable vertex is removed along them
    for (const auto& [key, slot] : inst.literal_edge_map) {
        CHECK(inst.variable_vertices.count(key.first));
        CHECK(inst.clause_vertices.count(key.second));
        CHECK(inst.graph.live(slot.u));
        CHECK(inst.graph.live(slot.v));
        CHECK(!inst.graph.has_edge(slot.u, slot.v));
    }

    // even blockers make every degree even
    GadgetInstance even = build_reduction(f, BuildOptions{true});
    even.graph.validate();
    for (VertexId v : even.graph.vertices()) CHECK(even.graph.degree(v) % 2 == 0);
}

TEST_CASE("removability of the instance mirrors satisfiability") {
    // satisfiable example
    Formula sat = make_formula(3, {{1, -2, 3}, {-1, 2}, {2, -3}});
    GadgetInstance sat_inst = build_reduction(sat);
    CHECK(truth_table_sat(sat));
    CHECK(instance_removable(sat_inst));
    CHECK(verify_reduction(sat_inst, sat));

    // unsatisfiable via a unit contradiction: the canned core takes over
    Formula unsat = make_formula(2, {{1}, {-1, 2}, {-2}});
    CHECK(!truth_table_sat(unsat));
    GadgetInstance unsat_inst = build_reduction(unsat);
    CHECK(!instance_removable(unsat_inst));
    CHECK(verify_reduction(unsat_inst, unsat));

    // an unsatisfiable formula without units (the canned core qualifies)
    Formula core = unsat_core_formula();
    GadgetInstance core_inst = build_reduction(core);
    CHECK(!instance_removable(core_inst));
    CHECK(verify_reduction(core_inst, core));

    // the search is capped at 8 active variables
    Formula wide;
    wide.num_vars = 9;
    for (int v = 1; v <= 9; v += 3) wide.clauses.push_back({v, v + 1, v + 2});
    GadgetInstance wide_inst = build_reduction(wide);
    CHECK(throws_code([&] { instance_removable(wide_inst); }, ErrorCode::TooLarge));
    CHECK(throws_code([&] { verify_reduction(wide_inst, wide); }, ErrorCode::TooLarge));
}

TEST_CASE("random mixed-size formulas: removability equals satisfiability") {
    Rng rng(2025);
    int done = 0;
    for (int trial = 0; done < 30 && trial < 200; ++trial) {
        const int vars = 2 + static_cast<int>(rng.below(4));
        Formula f = random_3sat3(rng, vars, 2 + rng.below(5));
        GadgetInstance inst = build_reduction(f);
        if (inst.variable_vertices.size() > 8) continue;
        CHECK(verify_reduction(inst, f));
        ++done;
    }
    CHECK(done == 30);
}

TEST_CASE("padding reaches the requested sparsity regime") {
    Formula f = make_formula(3, {{1, -2, 3}, {-1, 2}});
    GadgetInstance inst = build_reduction(f);
    const double eps = 0.5;
    Graph padded = padded_instance(inst, eps);
    CHECK(padded.n() > inst.graph.n());
    CHECK(static_cast<double>(inst.m_target) <=
          std::pow(static_cast<double>(padded.n()), eps) + 1e-9);
    // the padding arrives as disjoint blocks of degree 27
    auto hist = padded.degree_histogram();
    CHECK(hist.count(27));

    CHECK(throws_code([&] { padded_instance(inst, 0.0); }, ErrorCode::BadParams));
    CHECK(throws_code([&] { padded_instance(inst, 1.5); }, ErrorCode::BadParams));
    CHECK(throws_code([&] { padded_instance(inst, 0.05, 1000); },
                      ErrorCode::PaddingTooLarge));
}

TEST_CASE("the 4-regular family is what it says") {
    for (std::size_t k : {3, 4, 7}) {
        Graph g = irreducible_4regular(k);
        g.validate();
        CHECK(g.n() == 4 * k);
        for (VertexId v : g.vertices()) CHECK(g.degree(v) == 4);
        CHECK(is_irreducible(StubGraph(g)).irreducible);
        CHECK(g.component_count() == 1);
    }
    CHECK(throws_code([] { irreducible_4regular(2); }, ErrorCode::KTooSmall));
}

TEST_CASE("4-regular block structure detection") {
    // the family itself: k blocks, all K4
    FourRegularDecomposition dec =
        check_4regular_indecomposable_structure(irreducible_4regular(5));
    CHECK(dec.matches);
    CHECK(dec.blocks.size() == 5);
    for (const auto& b : dec.blocks) {
        CHECK(b.kind == FourRegularBlockKind::K4);
        CHECK(b.vertices.size() == 4);
    }

    // K5 is a single block
    FourRegularDecomposition k5 = check_4regular_indecomposable_structure(complete_graph(5));
    CHECK(k5.matches);
    REQUIRE(k5.blocks.size() == 1);
    CHECK(k5.blocks[0].kind == FourRegularBlockKind::K5);

    // two K5-minus-an-edge blocks joined on their degree-3 vertices
    Graph pair(10);
    for (int base : {0, 5})
        for (int i = 0; i < 5; ++i)
            for (int j = i + 1; j < 5; ++j)
                if (!(i == 0 && j == 1)) pair.add_edge(base + i, base + j);
    pair.add_edge(0, 5);
    pair.add_edge(1, 6);
    FourRegularDecomposition halves = check_4regular_indecomposable_structure(pair);
    CHECK(halves.matches);
    CHECK(halves.blocks.size() == 2);
    for (const auto& b : halves.blocks) CHECK(b.kind == FourRegularBlockKind::K5MinusEdge);

    // K_{4,4} is 4-regular but reducible: no block structure
    FourRegularDecomposition b44 = check_4regular_indecomposable_structure(complete_bipartite(4, 4));
    CHECK(!b44.matches);
    CHECK(!is_irreducible(StubGraph(complete_bipartite(4, 4))).irreducible);

    CHECK(throws_code([] { check_4regular_indecomposable_structure(cycle_graph(5)); },
                      ErrorCode::NotFourRegular));
}

TEST_CASE("structure verdict equals the sweep verdict on random 4-regular graphs") {
    Rng rng(808);
    int agree = 0;
    for (int trial = 0; trial < 40; ++trial) {
        Graph g = random_regular(rng, 8 + 2 * rng.below(4), 4);
        FourRegularDecomposition dec = check_4regular_indecomposable_structure(g);
        CHECK(dec.matches == is_irreducible(StubGraph(g)).irreducible);
        ++agree;
    }
    CHECK(agree == 40);
}

TEST_CASE("terminal kernels of the low-degree reduction") {
    CHECK(check_low_degree_kernel(complete_graph(3)));
    CHECK(check_low_degree_kernel(complete_graph(4)));

    // triangle with pendants on distinct corners
    auto pendant_triangle = [](int pendants) {
        Graph g(3 + pendants);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(0, 2);
        for (int p = 0; p < pendants; ++p) g.add_edge(p, 3 + p);
        return g;
    };
    for (int p = 1; p <= 3; ++p) CHECK(check_low_degree_kernel(pendant_triangle(p)));

    // disjoint unions: many clean kernels, at most one stub carrier
    Graph combo(7);
    combo.add_edge(0, 1);
    combo.add_edge(1, 2);
    combo.add_edge(0, 2);
    for (int i = 3; i < 7; ++i)
        for (int j = i + 1; j < 7; ++j) combo.add_edge(i, j);
    CHECK(check_low_degree_kernel(combo));  // K3 + K4

    Graph two_stubs(8);
    for (int base : {0, 4}) {
        two_stubs.add_edge(base, base + 1);
        two_stubs.add_edge(base + 1, base + 2);
        two_stubs.add_edge(base, base + 2);
        two_stubs.add_edge(base, base + 3);
    }
    CHECK(!check_low_degree_kernel(two_stubs));  // two pendant components

    CHECK(!check_low_degree_kernel(cycle_graph(4)));
    CHECK(!check_low_degree_kernel(cycle_graph(5)));
    CHECK(!check_low_degree_kernel(path_graph(3)));

    // a pendant chain is not a kernel
    Graph chain = pendant_triangle(1);
    const VertexId tail = chain.add_vertex();
    chain.add_edge(3, tail);
    CHECK(!check_low_degree_kernel(chain));

    CHECK(throws_code([] { check_low_degree_kernel(complete_graph(5)); },
                      ErrorCode::DegreeTooHigh));
}
