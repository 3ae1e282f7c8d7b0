#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>

#include "asess/typing.hpp"
#include "support.hpp"

namespace asess {
namespace {

bool holds(const SessionFile& sf, const Expectation& ex) {
    switch (ex.kind) {
    case Expectation::Kind::Typable: return typecheck(sf.network(ex.net), sf.type(ex.type)).ok;
    case Expectation::Kind::Balanced: return balanced(sf.type(ex.type)).ok;
    case Expectation::Kind::Bounded: return bounded(sf.type(ex.type).global).ok;
    case Expectation::Kind::WellFormed: return well_formed(sf.type(ex.type)).ok;
    }
    return false;
}

class CorpusFile : public ::testing::TestWithParam<std::string> {};

TEST_P(CorpusFile, ExpectationsHold) {
    auto sf = testing::load_corpus(GetParam());
    for (const auto& ex : sf.expectations)
        EXPECT_EQ(holds(sf, ex), !ex.negated) << GetParam() << ":" << ex.line;
}

INSTANTIATE_TEST_SUITE_P(All, CorpusFile, ::testing::ValuesIn(testing::corpus_files()),
                         [](const auto& info) {
                             std::string n = info.param.substr(0, info.param.find('.'));
                             for (char& c : n)
                                 if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
                             return n;
                         });

TEST(Corpus, ListsEveryFile) {
    auto files = testing::corpus_files();
    EXPECT_GE(files.size(), 10u);
    for (const char* f : {"characteristic.sess", "double.sess", "choice.sess", "depth.sess", "balancing.sess"})
        EXPECT_NE(std::find(files.begin(), files.end(), f), files.end()) << f;
}

} // namespace
} // namespace asess
