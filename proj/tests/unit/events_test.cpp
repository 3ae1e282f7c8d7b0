#include <gtest/gtest.h>

#include <algorithm>

#include "asess/events.hpp"
#include "asess/semantics.hpp"
#include "asess/textfmt.hpp"
#include "support.hpp"

namespace asess {
namespace {

Trace T(const std::string& s) { return parse_trace(s); }
NEvent N(const std::string& loc, const std::string& acts) { return NEvent{loc, parse_action_seq(acts)}; }

std::size_t idx(const NetworkES& f, const NEvent& e) {
    auto i = f.index_of(e);
    if (!i) throw std::runtime_error("missing event " + to_string(e));
    return *i;
}

std::size_t idx(const TypeES& t, const OTrace& w, const std::string& tr) {
    auto i = t.index_of(make_tevent(w, T(tr)));
    if (!i) throw std::runtime_error("missing t-event " + tr);
    return *i;
}

TEST(ProcessEvents, TruncatedRecursion) {
    Process p = parse_process("P where P = q!l; P (+) q!l'");
    auto pes = pes_of_process(p, 3);
    std::set<PEvent> got(pes.events.begin(), pes.events.end());
    std::set<PEvent> want;
    for (const char* s : {"q!l", "q!l . q!l", "q!l . q!l . q!l", "q!l'", "q!l . q!l'", "q!l . q!l . q!l'"})
        want.insert(parse_action_seq(s));
    EXPECT_EQ(got, want);
    EXPECT_FALSE(check_laws(pes.es));
    EXPECT_EQ(pes_of_process(Process{}, 4).events.size(), 0u);
}

TEST(NetworkEvents, WorkedCrossFlow) {
    OTrace w = T("p->q!l1 . p->q!l2 . q->s!l5 . q->p!l3");
    NEvent a = N("p", "r?l4 . q?l3 . q!l");
    NEvent b = N("q", "p!l' . p?l1 . p?l2 . p?l");
    EXPECT_TRUE(nevent_flow(a, b, w));
    EXPECT_FALSE(nevent_flow(a, a, w));
    EXPECT_FALSE(nevent_flow(b, a, w));
}

TEST(NetworkEvents, QueueJustification) {
    OTrace w2 = T("p->q!l . p->q!l");
    EXPECT_TRUE(queue_justified(N("q", "p!l' . p?l"), w2));
    EXPECT_TRUE(queue_justified(N("q", "p!l' . p?l . p?l"), w2));
    EXPECT_FALSE(queue_justified(N("q", "p?l . p?l"), T("p->q!l")));
    EXPECT_FALSE(queue_justified(N("q", "p?l"), {}));
}

TEST(NetworkEvents, NarrowingEmptiesExample) {
    auto sf = testing::load_corpus("narrowing.sess");
    std::set<NEvent> cand{N("p", "q?l"), N("p", "q?l . r!l'"), N("r", "p?l'")};
    EXPECT_TRUE(narrowing(cand, {}).empty());
    EXPECT_TRUE(fes_of_network(sf.network("N"), 4).events.empty());
    std::set<NEvent> outs{N("p", "q!a"), N("p", "q!a . r!b")};
    EXPECT_EQ(narrowing(outs, {}), outs);
}

TEST(NetworkEvents, DoubleExchange) {
    auto sf = testing::load_corpus("double.sess");
    auto f = fes_of_network(sf.network("N"), 4);
    ASSERT_EQ(f.events.size(), 8u);
    std::vector<std::size_t> r{idx(f, N("p", "q!l")), idx(f, N("p", "q!l . q?l'")),
                               idx(f, N("p", "q!l . q?l' . q!l")), idx(f, N("p", "q!l . q?l' . q!l . q?l'"))};
    std::vector<std::size_t> s{idx(f, N("q", "p!l'")), idx(f, N("q", "p!l' . p?l")),
                               idx(f, N("q", "p!l' . p?l . p!l'")), idx(f, N("q", "p!l' . p?l . p!l' . p?l"))};
    std::set<std::pair<std::size_t, std::size_t>> want{{r[0], s[1]}, {r[2], s[3]}, {s[0], r[1]}, {s[2], r[3]}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) {
            want.insert({r[i], r[j]});
            want.insert({s[i], s[j]});
        }
    std::set<std::pair<std::size_t, std::size_t>> got;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            if (f.es.before(i, j)) got.insert({i, j});
    EXPECT_EQ(got, want);
    EXPECT_EQ(f.es.conflict_pairs(), 0u);
    EXPECT_FALSE(check_laws(f.es));

    auto step = fes_of_network(sf.network("Nstep"), 3);
    EXPECT_EQ(step.events.size(), 6u);
    EXPECT_TRUE(step.es.before(idx(step, N("p", "q?l' . q!l")), idx(step, N("q", "p?l . p!l' . p?l"))));
    EXPECT_TRUE(step.es.before(idx(step, N("q", "p?l . p!l'")), idx(step, N("p", "q?l' . q!l . q?l'"))));
    EXPECT_EQ(step.es.relation_pairs(), 8u);
    EXPECT_TRUE(queue_justified(N("p", "q?l'"), step.omega));
    EXPECT_TRUE(queue_justified(N("q", "p?l"), step.omega));

    auto fin = fes_of_network(sf.network("Nfinal"), 3);
    ASSERT_EQ(fin.events.size(), 1u);
    EXPECT_EQ(fin.events[0], N("q", "p?l"));
}

TEST(NetworkEvents, ChoiceNetwork) {
    auto sf = testing::load_corpus("choice.sess");
    auto f = fes_of_network(sf.network("N"), 4);
    ASSERT_EQ(f.events.size(), 7u);
    auto r1 = idx(f, N("p", "q!l1")), r2 = idx(f, N("p", "q!l2"));
    auto r3 = idx(f, N("p", "q!l1 . r!l")), r4 = idx(f, N("p", "q!l2 . r!l"));
    auto s1 = idx(f, N("q", "p?l1")), s2 = idx(f, N("q", "p?l2")), t1 = idx(f, N("r", "p?l"));
    std::set<std::pair<std::size_t, std::size_t>> flows{{r1, r3}, {r2, r4}, {r1, s1}, {r3, t1}, {r2, s2}, {r4, t1}};
    std::set<std::pair<std::size_t, std::size_t>> conf{{r1, r2}, {r1, r4}, {r2, r3}, {r3, r4}, {s1, s2}};
    std::set<std::pair<std::size_t, std::size_t>> got_f, got_c;
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j) {
            if (f.es.before(i, j)) got_f.insert({i, j});
            if (f.es.conflicts(i, j)) got_c.insert({std::min(i, j), std::max(i, j)});
        }
    std::set<std::pair<std::size_t, std::size_t>> conf_sorted;
    for (auto [a, b] : conf) conf_sorted.insert({std::min(a, b), std::max(a, b)});
    EXPECT_EQ(got_f, flows);
    EXPECT_EQ(got_c, conf_sorted);

    auto step = fes_of_network(sf.network("Nstep"), 3);
    EXPECT_EQ(step.events.size(), 3u);
    EXPECT_EQ(step.es.conflict_pairs(), 0u);
    EXPECT_FALSE(step.index_of(N("q", "p?l2")));
}

TEST(TypeEvents, ChoiceType) {
    auto sf = testing::load_corpus("choice.sess");
    auto pes = pes_of_type(sf.type("G"), 4);
    ASSERT_EQ(pes.events.size(), 8u);
    const OTrace e;
    auto d1 = idx(pes, e, "p->q!l1"), d2 = idx(pes, e, "p->q!l2");
    auto d1p = idx(pes, e, "p->q!l1 . p->q?l1"), d2p = idx(pes, e, "p->q!l2 . p->q?l2");
    auto d3 = idx(pes, e, "p->q!l1 . p->r!l"), d4 = idx(pes, e, "p->q!l2 . p->r!l");
    auto d1pp = idx(pes, e, "p->q!l1 . p->r!l . p->r?l"), d2pp = idx(pes, e, "p->q!l2 . p->r!l . p->r?l");
    std::set<std::pair<std::size_t, std::size_t>> want{{d1, d3},  {d1, d1p},  {d2, d4},   {d2, d2p},
                                                       {d3, d1pp}, {d4, d2pp}, {d1, d1pp}, {d2, d2pp}};
    std::set<std::pair<std::size_t, std::size_t>> got;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            if (pes.es.strictly_before(i, j)) got.insert({i, j});
    EXPECT_EQ(got, want);
    EXPECT_TRUE(pes.es.conflicts(d1, d2));
    for (auto a : {d1, d1p, d3, d1pp})
        for (auto b : {d2, d2p, d4, d2pp}) EXPECT_TRUE(pes.es.conflicts(a, b));
    EXPECT_EQ(pes.es.conflict_pairs(), 16u);
    EXPECT_FALSE(check_laws(pes.es));
    EXPECT_TRUE(tevent_equal(ev(e, T("p->q!l1 . p->r!l . p->r?l")), pes.events[d1pp]));
    EXPECT_TRUE(pes_of_type(AsyncType{}, 5).events.empty());
}

TEST(TypeEvents, ForkingTraces) {
    auto sf = testing::load_corpus("forking.sess");
    TEvent a = ev({}, T("p->q!l . r->s!l1 . p->q?l"));
    TEvent b = ev({}, T("p->q!l . r->s!l2 . p->q?l"));
    EXPECT_TRUE(tevent_equal(a, b));
    EXPECT_EQ(a.trace, T("p->q!l . p->q?l"));
    auto pes = pes_of_type(sf.type("G"), 4);
    std::size_t reads = std::count_if(pes.events.begin(), pes.events.end(),
                                      [](const TEvent& e) { return tevent_io(e) == in("p", "q", "l"); });
    EXPECT_EQ(reads, 1u);

    TEvent c = ev({}, T("p->q!l . q->s!l1 . p->q?l"));
    TEvent d = ev({}, T("p->q!l . q->s!l2 . p->q?l"));
    EXPECT_FALSE(tevent_equal(c, d));
    EXPECT_TRUE(tevent_conflict(c, d));
    auto pq = pes_of_type(sf.type("Gq"), 4);
    std::vector<std::size_t> qreads;
    for (std::size_t i = 0; i < pq.events.size(); ++i)
        if (tevent_io(pq.events[i]) == in("p", "q", "l")) qreads.push_back(i);
    ASSERT_EQ(qreads.size(), 2u);
    EXPECT_TRUE(pq.es.conflicts(qreads[0], qreads[1]));
}

TEST(TypeEvents, Relations) {
    TEvent d1 = ev({}, T("p->q!l1"));
    TEvent d3 = ev({}, T("p->q!l1 . p->r!l"));
    EXPECT_TRUE(tevent_leq(d1, d3));
    EXPECT_TRUE(tevent_leq(d1, d1));
    EXPECT_FALSE(tevent_leq(d3, d1));
    EXPECT_TRUE(tevent_conflict(d1, ev({}, T("p->q!l2"))));
    EXPECT_EQ(ev(T("p->q!l"), T("r->s!a")), make_tevent(T("p->q!l"), T("r->s!a")));
    EXPECT_THROW(make_tevent({}, T("p->q!l . p->q?l . r->q?l")), PreconditionError);
}

TEST(Residuals, NetworkEvents) {
    auto r = nevent_residual(N("p", "q!l . q?l'"), out("p", "q", "l"));
    ASSERT_TRUE(r);
    EXPECT_EQ(*r, N("p", "q?l'"));
    EXPECT_FALSE(nevent_residual(N("p", "q!l"), out("p", "q", "l")));
    EXPECT_FALSE(nevent_residual(N("p", "q!a . q?l'"), out("p", "q", "l")));
    EXPECT_EQ(nevent_residual(N("r", "p?l"), out("p", "q", "l")), N("r", "p?l"));
    EXPECT_EQ(nevent_retrieval(*r, out("p", "q", "l")), N("p", "q!l . q?l'"));
}

TEST(Residuals, QueueMaps) {
    EXPECT_EQ(queue_map_fwd(out("p", "q", "l"), {}), T("p->q!l"));
    EXPECT_EQ(queue_map_fwd(in("p", "q", "l"), T("p->q!l . r->s!a")), T("r->s!a"));
    EXPECT_FALSE(queue_map_fwd(in("p", "q", "l"), {}));
    EXPECT_EQ(queue_map_bwd(in("p", "q", "l"), T("r->s!a")), T("p->q!l . r->s!a"));
}

TEST(Residuals, TypeEvents) {
    auto a = tevent_retrieval(out("p", "q", "l"), make_tevent(T("p->q!l"), T("p->q?l")));
    ASSERT_TRUE(a);
    EXPECT_EQ(*a, make_tevent({}, T("p->q!l . p->q?l")));
    auto b = tevent_retrieval(out("p", "q", "l"), make_tevent(T("p->q!l"), T("r->s!l' . r->s?l'")));
    ASSERT_TRUE(b);
    EXPECT_EQ(*b, make_tevent({}, T("r->s!l' . r->s?l'")));
    auto c = tevent_residual(make_tevent(T("p->r!l'"), T("p->r?l'")), out("p", "q", "l"));
    ASSERT_TRUE(c);
    EXPECT_EQ(c->trace, T("p->r?l'"));
    EXPECT_TRUE(otrace_equiv(c->omega, T("p->r!l' . p->q!l")));
}

TEST(Sequences, NecAndTec) {
    EXPECT_EQ(nec(T("p->q!l")), (std::vector<NEvent>{N("p", "q!l")}));
    Trace run = T("p->q!l . q->p!l' . q->p?l' . p->q?l");
    auto ts = tec({}, run);
    ASSERT_EQ(ts.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(tevent_io(ts[i]), run[i]);
        for (std::size_t j = 0; j < 4; ++j) EXPECT_FALSE(tevent_conflict(ts[i], ts[j]));
    }
    auto ns = nec(run);
    std::set<NEvent> got(ns.begin(), ns.end());
    EXPECT_EQ(got, (std::set<NEvent>{N("p", "q!l"), N("q", "p!l'"), N("p", "q!l . q?l'"), N("q", "p!l' . p?l")}));
}

} // namespace
} // namespace asess
