#include "asess/textfmt.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

namespace asess {

namespace {

enum class Tok {
    Ident, Zero, Arrow, DColon, Turnstile, Bar, OPlus, BoxPlus, Plus, Semi, Bang, Query,
    LAngle, RAngle, Dot, Comma, Eq, LParen, RParen, Eof
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t col;
};

const std::set<std::string>& statement_keywords() {
    static const std::set<std::string> k{"def", "net", "type", "expect", "where"};
    return k;
}

bool is_keyword(const std::string& s) {
    return statement_keywords().count(s) || s == "End" || s == "empty";
}

std::vector<Token> lex(const std::string& src, const std::string& file) {
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto adv = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto starts = [&](const char* s) { return src.compare(i, std::char_traits<char>::length(s), s) == 0; };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            adv(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') adv(1);
            continue;
        }
        std::size_t l = line, cc = col;
        auto push = [&](Tok k, std::size_t n) {
            out.push_back(Token{k, src.substr(i, n), l, cc});
            adv(n);
        };
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i + 1;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            while (j < src.size() && src[j] == '\'') ++j;
            push(Tok::Ident, j - i);
            continue;
        }
        if (c == '0') {
            if (i + 1 < src.size() && (std::isalnum(static_cast<unsigned char>(src[i + 1])) || src[i + 1] == '_'))
                throw ParseError(file, l, cc, "identifiers must start with a letter");
            push(Tok::Zero, 1);
            continue;
        }
        if (starts("->")) { push(Tok::Arrow, 2); continue; }
        if (starts("::")) { push(Tok::DColon, 2); continue; }
        if (starts("|-")) { push(Tok::Turnstile, 2); continue; }
        if (starts("(+)")) { push(Tok::OPlus, 3); continue; }
        if (starts("[+]")) { push(Tok::BoxPlus, 3); continue; }
        switch (c) {
        case '|': push(Tok::Bar, 1); continue;
        case '+': push(Tok::Plus, 1); continue;
        case ';': push(Tok::Semi, 1); continue;
        case '!': push(Tok::Bang, 1); continue;
        case '?': push(Tok::Query, 1); continue;
        case '<': push(Tok::LAngle, 1); continue;
        case '>': push(Tok::RAngle, 1); continue;
        case '.': push(Tok::Dot, 1); continue;
        case ',': push(Tok::Comma, 1); continue;
        case '=': push(Tok::Eq, 1); continue;
        case '(': push(Tok::LParen, 1); continue;
        case ')': push(Tok::RParen, 1); continue;
        default: break;
        }
        throw ParseError(file, l, cc, std::string("unexpected character '") + c + "'");
    }
    out.push_back(Token{Tok::Eof, "", line, col});
    return out;
}

std::string describe(const Token& t) {
    if (t.kind == Tok::Eof) return "end of input";
    return "'" + t.text + "'";
}

class Parser {
public:
    Parser(const std::vector<Token>& toks, std::size_t begin, std::size_t end, std::string file)
        : toks_(toks), pos_(begin), end_(end), file_(std::move(file)) {}

    const Token& peek(std::size_t k = 0) const {
        std::size_t p = pos_ + k;
        return p < end_ ? toks_[p] : toks_[end_ < toks_.size() ? end_ : toks_.size() - 1];
    }
    bool at(Tok k, std::size_t off = 0) const { return peek(off).kind == k && pos_ + off < end_; }
    bool at_end() const { return pos_ >= end_; }
    bool at_word(const std::string& w) const { return at(Tok::Ident) && peek().text == w; }

    const Token& next() {
        const Token& t = peek();
        if (pos_ < end_) ++pos_;
        return t;
    }

    bool accept(Tok k) {
        if (at(k)) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const Token& t, const std::string& msg) const {
        throw ParseError(file_, t.line, t.col, msg);
    }

    const Token& expect(Tok k, const std::string& what) {
        if (!at(k)) fail(peek(), "expected " + what + ", found " + describe(peek()));
        return next();
    }

    std::string ident(const std::string& what) {
        const Token& t = expect(Tok::Ident, what);
        if (is_keyword(t.text)) fail(t, "reserved word '" + t.text + "' cannot be used as " + what);
        return t.text;
    }

    void expect_end() {
        if (!at_end()) fail(peek(), "unexpected " + describe(peek()));
    }

    // ---- processes

    ProcTerm proc_term() {
        const Token& start = peek();
        ProcTerm first = proc_seq();
        if (!at(Tok::OPlus) && !at(Tok::Plus)) return first;
        Tok op = peek().kind;
        std::vector<std::pair<const Token*, ProcTerm>> alts;
        alts.emplace_back(&start, std::move(first));
        while (at(Tok::OPlus) || at(Tok::Plus)) {
            const Token& opt = next();
            if (opt.kind != op) fail(opt, "mixed choice operators '(+)' and '+'");
            const Token* s = &peek();
            alts.emplace_back(s, proc_seq());
        }
        ProcTerm::Kind want = op == Tok::OPlus ? ProcTerm::Kind::Out : ProcTerm::Kind::In;
        ProcTerm r;
        r.kind = want;
        for (auto& [tok, alt] : alts) {
            if (alt.kind != want)
                fail(*tok, op == Tok::OPlus ? "alternatives of '(+)' must start with an output"
                                            : "alternatives of '+' must start with an input");
            if (r.peer.empty()) r.peer = alt.peer;
            if (alt.peer != r.peer) fail(*tok, "all alternatives of a choice must address the same participant");
            for (std::size_t i = 0; i < alt.labels.size(); ++i) {
                for (const auto& l : r.labels)
                    if (l == alt.labels[i]) fail(*tok, "duplicate label '" + l + "' in choice");
                r.labels.push_back(alt.labels[i]);
                r.conts.push_back(std::move(alt.conts[i]));
            }
        }
        return r;
    }

    ProcTerm proc_seq() {
        if (at(Tok::Ident) && (at(Tok::Bang, 1) || at(Tok::Query, 1))) {
            std::string peer = ident("participant");
            Dir d = next().kind == Tok::Bang ? Dir::Out : Dir::In;
            std::string l = ident("label");
            ProcTerm cont = ProcTerm::nil();
            if (accept(Tok::Semi)) cont = proc_seq();
            return ProcTerm::prefix(d, peer, l, std::move(cont));
        }
        if (accept(Tok::Zero)) return ProcTerm::nil();
        if (at(Tok::LParen)) {
            next();
            ProcTerm t = proc_term();
            expect(Tok::RParen, "')'");
            return t;
        }
        if (at(Tok::Ident) && !is_keyword(peek().text)) return ProcTerm::reference(next().text);
        fail(peek(), "expected a process, found " + describe(peek()));
    }

    // ---- global types

    GlobalTerm global_term() {
        const Token& start = peek();
        GlobalTerm first = global_seq();
        if (!at(Tok::BoxPlus)) return first;
        std::vector<std::pair<const Token*, GlobalTerm>> alts;
        alts.emplace_back(&start, std::move(first));
        while (accept(Tok::BoxPlus)) {
            const Token* s = &peek();
            alts.emplace_back(s, global_seq());
        }
        GlobalTerm r;
        r.kind = GlobalTerm::Kind::Out;
        for (auto& [tok, alt] : alts) {
            if (alt.kind != GlobalTerm::Kind::Out) fail(*tok, "alternatives of '[+]' must start with an output");
            if (r.from.empty()) {
                r.from = alt.from;
                r.to = alt.to;
            }
            if (alt.from != r.from || alt.to != r.to)
                fail(*tok, "all alternatives of a choice must use the same sender and receiver");
            for (std::size_t i = 0; i < alt.labels.size(); ++i) {
                for (const auto& l : r.labels)
                    if (l == alt.labels[i]) fail(*tok, "duplicate label '" + l + "' in choice");
                r.labels.push_back(alt.labels[i]);
                r.conts.push_back(std::move(alt.conts[i]));
            }
        }
        return r;
    }

    GlobalTerm global_seq() {
        if (at(Tok::Ident) && at(Tok::Arrow, 1)) {
            std::string p = ident("participant");
            next();
            std::string q = ident("participant");
            if (!at(Tok::Bang) && !at(Tok::Query)) fail(peek(), "expected '!' or '?', found " + describe(peek()));
            bool o = next().kind == Tok::Bang;
            std::string l = ident("label");
            GlobalTerm cont = GlobalTerm::end();
            if (accept(Tok::Semi)) cont = global_seq();
            return o ? GlobalTerm::send(p, q, l, std::move(cont)) : GlobalTerm::recv(p, q, l, std::move(cont));
        }
        if (at_word("End")) {
            next();
            return GlobalTerm::end();
        }
        if (at(Tok::LParen)) {
            next();
            GlobalTerm t = global_term();
            expect(Tok::RParen, "')'");
            return t;
        }
        if (at(Tok::Ident) && !is_keyword(peek().text)) return GlobalTerm::reference(next().text);
        fail(peek(), "expected a global type, found " + describe(peek()));
    }

    // ---- queues, traces

    Queue queue() {
        Queue q;
        if (at_word("empty")) {
            next();
            return q;
        }
        if (at_end() || !at(Tok::LAngle)) return q;
        do {
            expect(Tok::LAngle, "'<'");
            Message m;
            m.from = ident("participant");
            m.label = ident("label");
            m.to = ident("participant");
            expect(Tok::RAngle, "'>'");
            q.msgs.push_back(std::move(m));
        } while (accept(Tok::Dot));
        return q;
    }

    Comm comm() {
        std::string p = ident("participant");
        expect(Tok::Arrow, "'->'");
        std::string q = ident("participant");
        if (!at(Tok::Bang) && !at(Tok::Query)) fail(peek(), "expected '!' or '?', found " + describe(peek()));
        Dir d = next().kind == Tok::Bang ? Dir::Out : Dir::In;
        std::string l = ident("label");
        return Comm{d, p, q, l};
    }

    Trace trace() {
        Trace t;
        if (at_end()) return t;
        if (at_word("eps")) {
            next();
            return t;
        }
        t.push_back(comm());
        while (accept(Tok::Dot) || accept(Tok::Comma)) t.push_back(comm());
        return t;
    }

    Action action() {
        std::string p = ident("participant");
        if (!at(Tok::Bang) && !at(Tok::Query)) fail(peek(), "expected '!' or '?', found " + describe(peek()));
        Dir d = next().kind == Tok::Bang ? Dir::Out : Dir::In;
        return Action{d, p, ident("label")};
    }

    ActionSeq action_seq() {
        ActionSeq s;
        if (at_end()) return s;
        if (at_word("eps")) {
            next();
            return s;
        }
        s.push_back(action());
        while (accept(Tok::Semi) || accept(Tok::Dot)) s.push_back(action());
        return s;
    }

    std::size_t pos() const { return pos_; }

private:
    const std::vector<Token>& toks_;
    std::size_t pos_;
    std::size_t end_;
    std::string file_;
};

enum class DefKind { Proc, Global, Alias };

DefKind classify(const std::vector<Token>& toks, std::size_t b, std::size_t e, const std::string& file) {
    bool g = false, p = false;
    const Token* gt = nullptr;
    const Token* pt = nullptr;
    for (std::size_t i = b; i < e; ++i) {
        const Token& t = toks[i];
        if (t.kind == Tok::Arrow || t.kind == Tok::BoxPlus || (t.kind == Tok::Ident && t.text == "End")) {
            g = true;
            if (!gt) gt = &t;
        }
        if (t.kind == Tok::Zero || t.kind == Tok::OPlus || t.kind == Tok::Plus ||
            ((t.kind == Tok::Bang || t.kind == Tok::Query) && i > b && toks[i - 1].kind == Tok::Ident &&
             !(i >= b + 2 && toks[i - 2].kind == Tok::Arrow))) {
            p = true;
            if (!pt) pt = &t;
        }
    }
    if (g && p) {
        const Token& t = gt->line > pt->line || (gt->line == pt->line && gt->col > pt->col) ? *gt : *pt;
        throw ParseError(file, t.line, t.col, "definition mixes process and global type syntax");
    }
    if (g) return DefKind::Global;
    if (p) return DefKind::Proc;
    return DefKind::Alias;
}

struct PendingDef {
    std::string name;
    const Token* at;
    DefKind kind;
    ProcTerm proc;
    GlobalTerm global;
    std::string alias;
};

// Parses a `NAME = body` definition (after `def` or `where`) and registers it.
PendingDef parse_def(const std::vector<Token>& toks, std::size_t b, std::size_t e, const std::string& file) {
    Parser ps(toks, b, e, file);
    PendingDef d;
    d.at = &ps.peek();
    d.name = ps.ident("definition name");
    ps.expect(Tok::Eq, "'='");
    d.kind = classify(toks, ps.pos(), e, file);
    switch (d.kind) {
    case DefKind::Proc: d.proc = ps.proc_term(); break;
    case DefKind::Global: d.global = ps.global_term(); break;
    case DefKind::Alias: {
        while (ps.accept(Tok::LParen)) {}
        if (ps.at_end()) ps.fail(ps.peek(), "empty definition");
        d.alias = ps.ident("name");
        while (ps.accept(Tok::RParen)) {}
        break;
    }
    }
    ps.expect_end();
    return d;
}

void install_defs(std::vector<PendingDef>& defs, DefEnv& env, const std::string& file) {
    std::map<std::string, const PendingDef*> aliases;
    for (auto& d : defs) {
        if (env.procs.count(d.name) || env.globals.count(d.name) || aliases.count(d.name))
            throw ParseError(file, d.at->line, d.at->col, "duplicate definition of '" + d.name + "'");
        if (d.kind == DefKind::Proc) env.procs[d.name] = d.proc;
        else if (d.kind == DefKind::Global) env.globals[d.name] = d.global;
        else aliases[d.name] = &d;
    }
    std::function<DefKind(const std::string&, std::set<std::string>&)> kind_of =
        [&](const std::string& n, std::set<std::string>& seen) -> DefKind {
        if (env.procs.count(n)) return DefKind::Proc;
        if (env.globals.count(n)) return DefKind::Global;
        auto it = aliases.find(n);
        if (it == aliases.end()) return DefKind::Alias;
        if (!seen.insert(n).second)
            throw ParseError(file, it->second->at->line, it->second->at->col,
                             "unguarded recursion through '" + n + "'");
        return kind_of(it->second->alias, seen);
    };
    for (auto& [name, d] : aliases) {
        std::set<std::string> seen;
        DefKind k = kind_of(name, seen);
        if (k == DefKind::Alias)
            throw ParseError(file, d->at->line, d->at->col, "undefined name '" + d->alias + "'");
        if (k == DefKind::Proc) env.procs[name] = ProcTerm::reference(d->alias);
        else env.globals[name] = GlobalTerm::reference(d->alias);
    }
    for (auto& d : defs) {
        try {
            if (env.procs.count(d.name)) compile_process(ProcTerm::reference(d.name), env);
            else compile_global(GlobalTerm::reference(d.name), env);
        } catch (const DefinitionError& e) {
            throw ParseError(file, d.at->line, d.at->col, e.what());
        }
    }
}

// Splits [b, e) into a leading item and trailing `where NAME = ...` clauses.
struct WhereSplit {
    std::size_t item_end;
    std::vector<std::pair<std::size_t, std::size_t>> defs;
};

WhereSplit split_where(const std::vector<Token>& toks, std::size_t b, std::size_t e) {
    WhereSplit w{e, {}};
    std::vector<std::size_t> marks;
    for (std::size_t i = b; i < e; ++i)
        if (toks[i].kind == Tok::Ident && toks[i].text == "where") marks.push_back(i);
    if (marks.empty()) return w;
    w.item_end = marks.front();
    for (std::size_t k = 0; k < marks.size(); ++k)
        w.defs.emplace_back(marks[k] + 1, k + 1 < marks.size() ? marks[k + 1] : e);
    return w;
}

template <class F>
auto standalone(const std::string& text, const DefEnv& base, F item) {
    const std::string file = "<input>";
    auto toks = lex(text, file);
    std::size_t e = toks.size() - 1;
    WhereSplit w = split_where(toks, 0, e);
    DefEnv env = base;
    std::vector<PendingDef> defs;
    for (auto [db, de] : w.defs) defs.push_back(parse_def(toks, db, de, file));
    install_defs(defs, env, file);
    Parser ps(toks, 0, w.item_end, file);
    auto r = item(ps, env);
    ps.expect_end();
    return r;
}

std::vector<std::pair<std::string, ProcTerm>> network_entries(Parser& ps, Queue& q) {
    std::vector<std::pair<std::string, ProcTerm>> entries;
    std::set<std::string> seen;
    if (ps.at(Tok::Ident) && ps.at(Tok::DColon, 1)) {
        do {
            const Token& t = ps.peek();
            std::string p = ps.ident("participant");
            if (!seen.insert(p).second) ps.fail(t, "duplicate participant '" + p + "' in network");
            ps.expect(Tok::DColon, "'::'");
            entries.emplace_back(p, ps.proc_term());
        } while (ps.accept(Tok::Bar));
    }
    if (ps.accept(Tok::Turnstile)) q = ps.queue();
    return entries;
}

Network compile_network(const std::vector<std::pair<std::string, ProcTerm>>& entries, Queue q, const DefEnv& env) {
    Network n;
    for (const auto& [p, t] : entries) n.procs.emplace(p, compile_process(t, env));
    n.queue = std::move(q);
    return n;
}

// ---- printing

template <class Node>
void find_back_targets(const std::vector<Node>& nodes, NodeId n, std::vector<char>& state,
                       std::vector<NodeId>& targets) {
    state[n] = 1;
    for (const auto& b : nodes[n].branches) {
        if (state[b.next] == 1) {
            if (std::find(targets.begin(), targets.end(), b.next) == targets.end()) targets.push_back(b.next);
        } else if (state[b.next] == 0) {
            find_back_targets(nodes, b.next, state, targets);
        }
    }
    state[n] = 2;
}

class NameSupply {
public:
    explicit NameSupply(std::string prefix) : prefix_(std::move(prefix)) {}
    void reserve(const std::string& n) { used_.insert(n); }
    std::string take(const std::string& preferred) {
        if (!preferred.empty() && !used_.count(preferred) && !is_keyword(preferred)) {
            used_.insert(preferred);
            return preferred;
        }
        while (true) {
            std::string n = prefix_ + std::to_string(counter_++);
            if (used_.insert(n).second) return n;
        }
    }

private:
    std::string prefix_;
    std::set<std::string> used_;
    std::size_t counter_ = 0;
};

template <class GraphT, class Handle, class Derived>
class TermPrinter {
public:
    explicit TermPrinter(std::string prefix) : supply_(std::move(prefix)) {}

    std::string add(const Handle& h) {
        const auto& nodes = h.graph().nodes;
        std::vector<char> state(nodes.size(), 0);
        std::vector<NodeId> targets;
        find_back_targets(nodes, h.id(), state, targets);
        auto& names = names_[h.graph_ptr().get()];
        std::vector<NodeId> fresh;
        for (NodeId t : targets) {
            if (names.count(t)) continue;
            auto it = h.graph().names.find(t);
            names[t] = supply_.take(it == h.graph().names.end() ? "" : it->second);
            fresh.push_back(t);
        }
        for (NodeId t : fresh) out_.defs.emplace_back(names[t], construct(h.graph(), names, t));
        std::string main = ref_or_construct(h.graph(), names, h.id(), false);
        out_.terms.push_back(main);
        return main;
    }

    PrintedTerms result() const { return out_; }

protected:
    std::string ref_or_construct(const GraphT& g, const std::map<NodeId, std::string>& names, NodeId n,
                                 bool nested) {
        if (auto it = names.find(n); it != names.end()) return it->second;
        std::string s = construct(g, names, n);
        if (nested && g.nodes[n].branches.size() > 1) return "(" + s + ")";
        return s;
    }

    std::string construct(const GraphT& g, const std::map<NodeId, std::string>& names, NodeId n) {
        return static_cast<Derived*>(this)->construct_node(g, names, n);
    }

    NameSupply supply_;
    std::map<const GraphT*, std::map<NodeId, std::string>> names_;
    PrintedTerms out_;
};

class ProcPrinter : public TermPrinter<ProcGraph, Process, ProcPrinter> {
public:
    ProcPrinter() : TermPrinter("P") {}

    std::string construct_node(const ProcGraph& g, const std::map<NodeId, std::string>& names, NodeId n) {
        const ProcNode& node = g.nodes[n];
        if (node.kind == ProcNode::Kind::Nil) return "0";
        std::string sep = node.kind == ProcNode::Kind::Out ? " (+) " : " + ";
        std::string mark = node.kind == ProcNode::Kind::Out ? "!" : "?";
        std::string s;
        for (std::size_t i = 0; i < node.branches.size(); ++i) {
            if (i) s += sep;
            const Branch& b = node.branches[i];
            s += node.peer + mark + b.label;
            bool nil = g.nodes[b.next].kind == ProcNode::Kind::Nil && !names.count(b.next);
            if (!nil) s += ";" + ref_or_construct(g, names, b.next, true);
        }
        return s;
    }
};

class GlobalPrinter : public TermPrinter<GlobalGraph, Global, GlobalPrinter> {
public:
    GlobalPrinter() : TermPrinter("G") {}

    std::string construct_node(const GlobalGraph& g, const std::map<NodeId, std::string>& names, NodeId n) {
        const GlobalNode& node = g.nodes[n];
        if (node.kind == GlobalNode::Kind::End) return "End";
        std::string mark = node.kind == GlobalNode::Kind::Out ? "!" : "?";
        std::string s;
        for (std::size_t i = 0; i < node.branches.size(); ++i) {
            if (i) s += " [+] ";
            const Branch& b = node.branches[i];
            s += node.from + "->" + node.to + mark + b.label;
            bool end = g.nodes[b.next].kind == GlobalNode::Kind::End && !names.count(b.next);
            if (!end) s += ";" + ref_or_construct(g, names, b.next, true);
        }
        return s;
    }
};

std::string where_suffix(const PrintedTerms& pt) {
    std::string s;
    for (const auto& [n, body] : pt.defs) s += " where " + n + " = " + body;
    return s;
}

} // namespace

std::string to_string(Expectation::Kind k) {
    switch (k) {
    case Expectation::Kind::Typable: return "typable";
    case Expectation::Kind::Balanced: return "balanced";
    case Expectation::Kind::Bounded: return "bounded";
    case Expectation::Kind::WellFormed: return "wellformed";
    }
    return "?";
}

const Network& SessionFile::network(const std::string& name) const {
    auto it = networks.find(name);
    if (it == networks.end()) throw Error("no network named '" + name + "' in " + path);
    return it->second;
}

AsyncType SessionFile::type(const std::string& name) const {
    if (auto it = types.find(name); it != types.end()) return it->second;
    if (env.globals.count(name)) return AsyncType{compile_global(GlobalTerm::reference(name), env), {}};
    throw Error("no type named '" + name + "' in " + path);
}

Process SessionFile::process(const std::string& name) const {
    if (!env.procs.count(name)) throw Error("no process named '" + name + "' in " + path);
    return compile_process(ProcTerm::reference(name), env);
}

ProcTerm parse_process_term(const std::string& text) {
    return standalone(text, DefEnv{}, [](Parser& ps, const DefEnv&) { return ps.proc_term(); });
}

GlobalTerm parse_global_term(const std::string& text) {
    return standalone(text, DefEnv{}, [](Parser& ps, const DefEnv&) { return ps.global_term(); });
}

Process parse_process(const std::string& text, const DefEnv& env) {
    return standalone(text, env, [](Parser& ps, const DefEnv& e) {
        const Token& t = ps.peek();
        ProcTerm term = ps.proc_term();
        try {
            return compile_process(term, e);
        } catch (const DefinitionError& err) {
            ps.fail(t, err.what());
        }
    });
}

Global parse_global(const std::string& text, const DefEnv& env) {
    return standalone(text, env, [](Parser& ps, const DefEnv& e) {
        const Token& t = ps.peek();
        GlobalTerm term = ps.global_term();
        try {
            return compile_global(term, e);
        } catch (const DefinitionError& err) {
            ps.fail(t, err.what());
        }
    });
}

Queue parse_queue(const std::string& text) {
    return standalone(text, DefEnv{}, [](Parser& ps, const DefEnv&) { return ps.queue(); });
}

Network parse_network(const std::string& text, const DefEnv& env) {
    return standalone(text, env, [](Parser& ps, const DefEnv& e) {
        const Token& t = ps.peek();
        Queue q;
        auto entries = network_entries(ps, q);
        try {
            return compile_network(entries, q, e);
        } catch (const DefinitionError& err) {
            ps.fail(t, err.what());
        }
    });
}

AsyncType parse_async_type(const std::string& text, const DefEnv& env) {
    return standalone(text, env, [](Parser& ps, const DefEnv& e) {
        const Token& t = ps.peek();
        GlobalTerm g = ps.global_term();
        Queue q;
        if (ps.accept(Tok::Turnstile)) q = ps.queue();
        try {
            return AsyncType{compile_global(g, e), q};
        } catch (const DefinitionError& err) {
            ps.fail(t, err.what());
        }
    });
}

Comm parse_comm(const std::string& text) {
    return standalone(text, DefEnv{}, [](Parser& ps, const DefEnv&) { return ps.comm(); });
}

Trace parse_trace(const std::string& text) {
    return standalone(text, DefEnv{}, [](Parser& ps, const DefEnv&) { return ps.trace(); });
}

Action parse_action(const std::string& text) {
    return standalone(text, DefEnv{}, [](Parser& ps, const DefEnv&) { return ps.action(); });
}

ActionSeq parse_action_seq(const std::string& text) {
    return standalone(text, DefEnv{}, [](Parser& ps, const DefEnv&) { return ps.action_seq(); });
}

SessionFile parse_session(const std::string& text, const std::string& filename) {
    auto toks = lex(text, filename);
    std::size_t eof = toks.size() - 1;

    struct Stmt {
        std::size_t b, e;
    };
    std::vector<Stmt> stmts;
    for (std::size_t i = 0; i < eof;) {
        const Token& t = toks[i];
        if (t.kind != Tok::Ident || !statement_keywords().count(t.text) || t.text == "where")
            throw ParseError(filename, t.line, t.col, "expected 'def', 'net', 'type' or 'expect', found " + describe(t));
        std::size_t j = i + 1;
        while (j < eof && !(toks[j].kind == Tok::Ident && statement_keywords().count(toks[j].text) &&
                            toks[j].text != "where"))
            ++j;
        stmts.push_back({i, j});
        i = j;
    }

    SessionFile sf;
    sf.path = filename;
    std::vector<PendingDef> defs;
    struct PendingNet {
        std::string name;
        const Token* at;
        std::vector<std::pair<std::string, ProcTerm>> entries;
        Queue q;
    };
    struct PendingType {
        std::string name;
        const Token* at;
        GlobalTerm g;
        Queue q;
    };
    std::vector<PendingNet> nets;
    std::vector<PendingType> types;
    std::set<std::string> names;

    auto fresh_name = [&](Parser& ps, const std::string& what) {
        const Token& t = ps.peek();
        std::string n = ps.ident(what);
        if (!names.insert(n).second) ps.fail(t, "duplicate name '" + n + "'");
        return n;
    };

    for (const auto& st : stmts) {
        const std::string& kw = toks[st.b].text;
        if (kw == "def") {
            const Token& t = toks[st.b + 1 < st.e ? st.b + 1 : st.b];
            PendingDef d = parse_def(toks, st.b + 1, st.e, filename);
            if (!names.insert(d.name).second)
                throw ParseError(filename, t.line, t.col, "duplicate name '" + d.name + "'");
            defs.push_back(std::move(d));
        } else if (kw == "net") {
            Parser ps(toks, st.b + 1, st.e, filename);
            PendingNet n;
            n.at = &ps.peek();
            n.name = fresh_name(ps, "network name");
            ps.expect(Tok::Eq, "'='");
            n.entries = network_entries(ps, n.q);
            ps.expect_end();
            nets.push_back(std::move(n));
        } else if (kw == "type") {
            Parser ps(toks, st.b + 1, st.e, filename);
            PendingType ty;
            ty.at = &ps.peek();
            ty.name = fresh_name(ps, "type name");
            ps.expect(Tok::Eq, "'='");
            ty.g = ps.global_term();
            if (ps.accept(Tok::Turnstile)) ty.q = ps.queue();
            ps.expect_end();
            types.push_back(std::move(ty));
        } else {
            Parser ps(toks, st.b + 1, st.e, filename);
            Expectation ex;
            ex.line = toks[st.b].line;
            if (ps.at_word("not")) {
                ps.next();
                ex.negated = true;
            }
            const Token& kt = ps.peek();
            std::string k = ps.ident("expectation kind");
            if (k == "typable") {
                ex.kind = Expectation::Kind::Typable;
                ex.net = ps.ident("network name");
            } else if (k == "balanced") {
                ex.kind = Expectation::Kind::Balanced;
            } else if (k == "bounded") {
                ex.kind = Expectation::Kind::Bounded;
            } else if (k == "wellformed") {
                ex.kind = Expectation::Kind::WellFormed;
            } else {
                ps.fail(kt, "unknown expectation '" + k + "'");
            }
            ex.type = ps.ident("type name");
            ps.expect_end();
            sf.expectations.push_back(std::move(ex));
        }
    }

    install_defs(defs, sf.env, filename);
    for (auto& n : nets) {
        try {
            sf.networks.emplace(n.name, compile_network(n.entries, n.q, sf.env));
        } catch (const DefinitionError& e) {
            throw ParseError(filename, n.at->line, n.at->col, e.what());
        }
        sf.net_names.push_back(n.name);
    }
    for (auto& t : types) {
        try {
            sf.types.emplace(t.name, AsyncType{compile_global(t.g, sf.env), t.q});
        } catch (const DefinitionError& e) {
            throw ParseError(filename, t.at->line, t.at->col, e.what());
        }
        sf.type_names.push_back(t.name);
    }
    for (const auto& ex : sf.expectations) {
        if (ex.kind == Expectation::Kind::Typable && !sf.networks.count(ex.net))
            throw ParseError(filename, ex.line, 1, "expectation refers to unknown network '" + ex.net + "'");
        if (!sf.types.count(ex.type) && !sf.env.globals.count(ex.type))
            throw ParseError(filename, ex.line, 1, "expectation refers to unknown type '" + ex.type + "'");
    }
    return sf;
}

SessionFile load_session(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_session(ss.str(), path);
}

std::string PrintedTerms::defs_text() const {
    std::string s;
    for (const auto& [n, body] : defs) s += "def " + n + " = " + body + "\n";
    return s;
}

PrintedTerms print_processes(const std::vector<Process>& ps) {
    ProcPrinter pr;
    for (const auto& p : ps) pr.add(p);
    return pr.result();
}

PrintedTerms print_globals(const std::vector<Global>& gs) {
    GlobalPrinter pr;
    for (const auto& g : gs) pr.add(g);
    return pr.result();
}

std::string print(const Process& p) {
    auto pt = print_processes({p});
    return pt.terms[0] + where_suffix(pt);
}

std::string print(const Global& g) {
    auto pt = print_globals({g});
    return pt.terms[0] + where_suffix(pt);
}

std::string print(const Network& n) {
    std::vector<Process> ps;
    std::vector<std::string> who;
    for (const auto& [p, proc] : n.procs) {
        ps.push_back(proc);
        who.push_back(p);
    }
    auto pt = print_processes(ps);
    std::string s;
    for (std::size_t i = 0; i < who.size(); ++i) {
        if (i) s += " | ";
        s += who[i] + " :: " + pt.terms[i];
    }
    if (!s.empty()) s += " ";
    s += "|- " + to_string(n.queue);
    return s + where_suffix(pt);
}

std::string print(const AsyncType& t) {
    auto pt = print_globals({t.global});
    return pt.terms[0] + " |- " + to_string(t.queue) + where_suffix(pt);
}

} // namespace asess
