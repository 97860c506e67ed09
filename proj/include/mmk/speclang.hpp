// The .mmk text format: worlds, theories, maps, experiments, and concept
// tables. Hand-written lexer and single-lookahead recursive-descent parser
// with statement-boundary recovery, a resolution pass, a canonical
// serializer, semantic checks, and binders into the core types.
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mmk/cogmech.hpp"
#include "mmk/theoryzoo.hpp"
#include "mmk/worldmodel.hpp"

namespace mmk::speclang {

// Byte-oriented, 1-based, end-exclusive source range.
struct Span {
    int line = 1;
    int column = 1;
    int end_line = 1;
    int end_column = 1;
};

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    Span span;
    std::string code;  // stable identifier, e.g. "resolve.unknown_atom"
    std::string message;
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) {
        if (d.severity == Diagnostic::Severity::Error) {
            return true;
        }
    }
    return false;
}

struct SpannedId {
    std::string id;
    Span span;
};

struct NumberLit {
    double value = 0;
    Span span;

    bool is_integer() const {
        return std::isfinite(value) && value == std::floor(value) &&
               std::fabs(value) <= 9007199254740992.0;
    }
};

struct EdgeDecl {
    SpannedId name;
    std::vector<SpannedId> members;
    bool ordered = false;
};

struct AttrDecl {
    SpannedId attribute;
    SpannedId edge;
    NumberLit value;
};

struct WorldDecl {
    SpannedId name;
    std::vector<SpannedId> atoms;
    std::vector<EdgeDecl> edges;
    std::vector<AttrDecl> attrs;
    Span span;
};

struct ParamValue {
    enum class Kind { Number, Ident, EdgeSet, AtomSet, Threshold, All, None, Pairs };
    Kind kind = Kind::Number;
    NumberLit number;                     // Number; Threshold cut reuses .number
    SpannedId ident;                      // Ident; Threshold attribute name
    std::vector<SpannedId> ids;           // EdgeSet / AtomSet members
    std::vector<std::pair<SpannedId, SpannedId>> pairs;
    Span span;
};

struct ParamDecl {
    SpannedId name;
    ParamValue value;
    Span span;
};

struct TheoryDecl {
    SpannedId name;
    TheoryFamily family = TheoryFamily::Materialism;
    SpannedId world;
    std::vector<ParamDecl> params;
    Span span;
};

struct MapDecl {
    SpannedId name;
    std::vector<std::pair<SpannedId, SpannedId>> entries;
    Span span;
};

struct ExperimentEntry {
    SpannedId key;  // one of N, alpha, beta, trials, seed
    NumberLit value;
};

struct ExperimentDecl {
    SpannedId name;
    std::vector<ExperimentEntry> entries;
    Span span;
};

struct ConceptDecl {
    SpannedId name;
    std::vector<NumberLit> neurons;
};

struct ComposeDecl {
    SpannedId result;
    SpannedId a;
    SpannedId b;
};

struct ConceptsDecl {
    SpannedId name;
    std::vector<ConceptDecl> members;
    std::vector<ComposeDecl> compositions;
    Span span;
};

using Block = std::variant<WorldDecl, TheoryDecl, MapDecl, ExperimentDecl, ConceptsDecl>;

struct Document {
    std::vector<Block> blocks;
};

template <typename T>
inline const T* find_block(const Document& doc, const std::string& name) {
    for (const auto& block : doc.blocks) {
        if (const T* decl = std::get_if<T>(&block)) {
            if (decl->name.id == name) {
                return decl;
            }
        }
    }
    return nullptr;
}

template <typename T>
inline std::vector<const T*> blocks_of(const Document& doc) {
    std::vector<const T*> out;
    for (const auto& block : doc.blocks) {
        if (const T* decl = std::get_if<T>(&block)) {
            out.push_back(decl);
        }
    }
    return out;
}

struct ParseResult {
    Document document;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return !has_errors(diagnostics); }
};

inline std::optional<TheoryFamily> family_from_keyword(const std::string& word) {
    for (const auto family : all_theory_families()) {
        if (to_string(family) == word) {
            return family;
        }
    }
    return std::nullopt;
}

namespace detail {

enum class TokKind {
    Ident,
    Number,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Semi,
    Equals,
    Plus,
    Arrow,
    End,
};

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    double number = 0;
    Span span;
};

inline const char* token_name(TokKind kind) {
    switch (kind) {
    case TokKind::Ident: return "identifier";
    case TokKind::Number: return "number";
    case TokKind::LBrace: return "'{'";
    case TokKind::RBrace: return "'}'";
    case TokKind::LParen: return "'('";
    case TokKind::RParen: return "')'";
    case TokKind::Colon: return "':'";
    case TokKind::Semi: return "';'";
    case TokKind::Equals: return "'='";
    case TokKind::Plus: return "'+'";
    case TokKind::Arrow: return "'->'";
    case TokKind::End: return "end of input";
    }
    return "token";
}

class Lexer {
public:
    Lexer(const std::string& text, std::vector<Diagnostic>* diags)
        : text_(text), diags_(diags) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
                continue;
            }
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    advance();
                }
                continue;
            }
            const Span start = here();
            if (is_ident_start(c)) {
                tokens.push_back(lex_ident(start));
                continue;
            }
            if (is_digit(c)) {
                tokens.push_back(lex_number(start));
                continue;
            }
            if (c == '-') {
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
                    advance();
                    advance();
                    tokens.push_back(make(TokKind::Arrow, "->", start));
                    continue;
                }
                if (pos_ + 1 < text_.size() && is_digit(text_[pos_ + 1])) {
                    tokens.push_back(lex_number(start));
                    continue;
                }
                advance();
                report(start, "lex.invalid_char", "stray '-' outside a number or '->'");
                continue;
            }
            switch (c) {
            case '{': advance(); tokens.push_back(make(TokKind::LBrace, "{", start)); continue;
            case '}': advance(); tokens.push_back(make(TokKind::RBrace, "}", start)); continue;
            case '(': advance(); tokens.push_back(make(TokKind::LParen, "(", start)); continue;
            case ')': advance(); tokens.push_back(make(TokKind::RParen, ")", start)); continue;
            case ':': advance(); tokens.push_back(make(TokKind::Colon, ":", start)); continue;
            case ';': advance(); tokens.push_back(make(TokKind::Semi, ";", start)); continue;
            case '=': advance(); tokens.push_back(make(TokKind::Equals, "=", start)); continue;
            case '+': advance(); tokens.push_back(make(TokKind::Plus, "+", start)); continue;
            default:
                advance();
                report(start, "lex.invalid_char",
                       std::string("unexpected character '") + c + "'");
                continue;
            }
        }
        Token end;
        end.kind = TokKind::End;
        end.span = here();
        tokens.push_back(end);
        return tokens;
    }

private:
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_ident_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }
    static bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

    Span here() const { return Span{line_, column_, line_, column_ + 1}; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    Token make(TokKind kind, std::string text, Span start) const {
        Token tok;
        tok.kind = kind;
        tok.text = std::move(text);
        tok.span = start;
        tok.span.end_line = line_;
        tok.span.end_column = column_;
        return tok;
    }

    Token lex_ident(Span start) {
        const std::size_t begin = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
            advance();
        }
        return make(TokKind::Ident, text_.substr(begin, pos_ - begin), start);
    }

    Token lex_number(Span start) {
        const std::size_t begin = pos_;
        if (text_[pos_] == '-') {
            advance();
        }
        while (pos_ < text_.size() && is_digit(text_[pos_])) {
            advance();
        }
        if (pos_ < text_.size() && text_[pos_] == '.') {
            advance();
            while (pos_ < text_.size() && is_digit(text_[pos_])) {
                advance();
            }
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) {
                ++look;
            }
            if (look < text_.size() && is_digit(text_[look])) {
                while (pos_ < look) {
                    advance();
                }
                while (pos_ < text_.size() && is_digit(text_[pos_])) {
                    advance();
                }
            }
        }
        const std::string raw = text_.substr(begin, pos_ - begin);
        Token tok = make(TokKind::Number, raw, start);
        const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), tok.number);
        if (ec != std::errc() || ptr != raw.data() + raw.size()) {
            report(tok.span, "lex.bad_number", "malformed number '" + raw + "'");
            tok.number = 0;
        }
        return tok;
    }

    void report(Span span, std::string code, std::string message) {
        diags_->push_back(Diagnostic{Diagnostic::Severity::Error, span, std::move(code),
                                     std::move(message)});
    }

    const std::string& text_;
    std::vector<Diagnostic>* diags_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, std::vector<Diagnostic>* diags)
        : tokens_(std::move(tokens)), diags_(diags) {}

    Document run() {
        Document doc;
        while (!at(TokKind::End)) {
            if (at_keyword("world")) {
                if (auto decl = parse_world()) {
                    doc.blocks.emplace_back(std::move(*decl));
                }
            } else if (at_keyword("theory")) {
                if (auto decl = parse_theory()) {
                    doc.blocks.emplace_back(std::move(*decl));
                }
            } else if (at_keyword("map")) {
                if (auto decl = parse_map()) {
                    doc.blocks.emplace_back(std::move(*decl));
                }
            } else if (at_keyword("experiment")) {
                if (auto decl = parse_experiment()) {
                    doc.blocks.emplace_back(std::move(*decl));
                }
            } else if (at_keyword("concepts")) {
                if (auto decl = parse_concepts()) {
                    doc.blocks.emplace_back(std::move(*decl));
                }
            } else {
                error(peek().span, "parse.expected_block",
                      "expected 'world', 'theory', 'map', 'experiment', or 'concepts', got " +
                          describe(peek()));
                skip_to_block_start();
            }
        }
        return doc;
    }

private:
    const Token& peek(int offset = 0) const {
        const std::size_t i = std::min(pos_ + static_cast<std::size_t>(offset),
                                       tokens_.size() - 1);
        return tokens_[i];
    }
    bool at(TokKind kind) const { return peek().kind == kind; }
    bool at_keyword(const char* word) const {
        return at(TokKind::Ident) && peek().text == word;
    }
    Token take() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

    bool accept(TokKind kind) {
        if (at(kind)) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::optional<Token> expect(TokKind kind, const char* what) {
        if (at(kind)) {
            return take();
        }
        error(peek().span, "parse.expected_token",
              std::string("expected ") + what + ", got " + describe(peek()));
        return std::nullopt;
    }

    static std::string describe(const Token& tok) {
        if (tok.kind == TokKind::Ident || tok.kind == TokKind::Number) {
            return std::string(token_name(tok.kind)) + " '" + tok.text + "'";
        }
        return token_name(tok.kind);
    }

    void error(Span span, std::string code, std::string message) {
        diags_->push_back(Diagnostic{Diagnostic::Severity::Error, span, std::move(code),
                                     std::move(message)});
    }

    // Skip to just past the next ';', or stop before '}' / end of input.
    void recover_statement() {
        while (!at(TokKind::End) && !at(TokKind::RBrace)) {
            if (accept(TokKind::Semi)) {
                return;
            }
            ++pos_;
        }
    }

    void skip_to_block_start() {
        static const std::set<std::string> starters = {"world", "theory", "map", "experiment",
                                                       "concepts"};
        while (!at(TokKind::End)) {
            if (at(TokKind::Ident) && starters.count(peek().text) > 0) {
                return;
            }
            ++pos_;
        }
    }

    SpannedId spanned(const Token& tok) const { return SpannedId{tok.text, tok.span}; }
    NumberLit literal(const Token& tok) const { return NumberLit{tok.number, tok.span}; }

    std::optional<SpannedId> expect_ident(const char* what) {
        const auto tok = expect(TokKind::Ident, what);
        if (!tok) {
            return std::nullopt;
        }
        return spanned(*tok);
    }

    // world NAME { atoms: a b; edges: e1 = {a b} e2 = (a b); attr phi : e1 = 0.7; }
    std::optional<WorldDecl> parse_world() {
        WorldDecl decl;
        decl.span = peek().span;
        take();  // world
        const auto name = expect_ident("world name");
        if (!name || !expect(TokKind::LBrace, "'{'")) {
            skip_to_block_start();
            return std::nullopt;
        }
        decl.name = *name;

        std::set<std::string> atom_names;
        std::set<std::string> edge_names;
        std::set<std::pair<std::string, std::string>> attr_keys;
        bool saw_atoms = false;
        bool saw_edges = false;

        const auto check_member = [&](const SpannedId& member) {
            if (atom_names.count(member.id) == 0) {
                error(member.span, "resolve.unknown_atom",
                      "unresolved atom '" + member.id + "'");
            }
        };

        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (at_keyword("atoms") && peek(1).kind == TokKind::Colon) {
                take();
                take();
                if (saw_atoms) {
                    error(peek().span, "parse.duplicate_section",
                          "world already declared its atoms");
                }
                saw_atoms = true;
                if (!at(TokKind::Ident)) {
                    error(peek().span, "parse.expected_token",
                          "expected at least one atom name, got " + describe(peek()));
                    recover_statement();
                    continue;
                }
                while (at(TokKind::Ident)) {
                    const SpannedId atom = spanned(take());
                    if (!atom_names.insert(atom.id).second) {
                        error(atom.span, "resolve.duplicate_name",
                              "duplicate atom '" + atom.id + "'");
                    } else {
                        decl.atoms.push_back(atom);
                    }
                }
                if (!expect(TokKind::Semi, "';'")) {
                    recover_statement();
                }
                continue;
            }
            if (at_keyword("edges") && peek(1).kind == TokKind::Colon) {
                take();
                take();
                if (saw_edges) {
                    error(peek().span, "parse.duplicate_section",
                          "world already declared its edges");
                }
                saw_edges = true;
                if (!at(TokKind::Ident)) {
                    error(peek().span, "parse.expected_token",
                          "expected at least one edge declaration, got " + describe(peek()));
                    recover_statement();
                    continue;
                }
                bool bad = false;
                while (at(TokKind::Ident)) {
                    EdgeDecl edge;
                    edge.name = spanned(take());
                    if (!expect(TokKind::Equals, "'='")) {
                        bad = true;
                        break;
                    }
                    if (accept(TokKind::LBrace)) {
                        edge.ordered = false;
                        if (!at(TokKind::Ident)) {
                            error(peek().span, "parse.expected_token",
                                  "expected at least one edge member, got " + describe(peek()));
                            bad = true;
                            break;
                        }
                        while (at(TokKind::Ident)) {
                            edge.members.push_back(spanned(take()));
                        }
                        if (!expect(TokKind::RBrace, "'}'")) {
                            bad = true;
                            break;
                        }
                    } else if (accept(TokKind::LParen)) {
                        edge.ordered = true;
                        const auto cause = expect_ident("cause atom");
                        const auto effect = expect_ident("effect atom");
                        if (!cause || !effect || !expect(TokKind::RParen, "')'")) {
                            bad = true;
                            break;
                        }
                        edge.members.push_back(*cause);
                        edge.members.push_back(*effect);
                    } else {
                        error(peek().span, "parse.expected_token",
                              "expected '{' or '(' after edge name, got " + describe(peek()));
                        bad = true;
                        break;
                    }
                    if (atom_names.count(edge.name.id) > 0 ||
                        !edge_names.insert(edge.name.id).second) {
                        error(edge.name.span, "resolve.duplicate_name",
                              "duplicate name '" + edge.name.id + "'");
                    } else {
                        for (const auto& member : edge.members) {
                            check_member(member);
                        }
                        decl.edges.push_back(std::move(edge));
                    }
                }
                if (bad || !expect(TokKind::Semi, "';'")) {
                    recover_statement();
                }
                continue;
            }
            if (at_keyword("attr")) {
                take();
                AttrDecl attr;
                const auto attr_name = expect_ident("attribute name");
                if (!attr_name || !expect(TokKind::Colon, "':'")) {
                    recover_statement();
                    continue;
                }
                const auto edge = expect_ident("edge name");
                if (!edge || !expect(TokKind::Equals, "'='")) {
                    recover_statement();
                    continue;
                }
                const auto value = expect(TokKind::Number, "number");
                if (!value || !expect(TokKind::Semi, "';'")) {
                    recover_statement();
                    continue;
                }
                attr.attribute = *attr_name;
                attr.edge = *edge;
                attr.value = literal(*value);
                if (edge_names.count(attr.edge.id) == 0) {
                    error(attr.edge.span, "resolve.unknown_edge",
                          "unresolved edge '" + attr.edge.id + "'");
                } else if (!attr_keys.emplace(attr.attribute.id, attr.edge.id).second) {
                    error(attr.attribute.span, "resolve.duplicate_entry",
                          "attribute '" + attr.attribute.id + "' already set on edge '" +
                              attr.edge.id + "'");
                } else {
                    decl.attrs.push_back(std::move(attr));
                }
                continue;
            }
            error(peek().span, "parse.expected_statement",
                  "expected 'atoms:', 'edges:', or 'attr' in world body, got " + describe(peek()));
            recover_statement();
        }
        const auto close = expect(TokKind::RBrace, "'}'");
        if (close) {
            decl.span.end_line = close->span.end_line;
            decl.span.end_column = close->span.end_column;
        }
        if (!saw_atoms) {
            error(decl.span, "parse.expected_statement",
                  "world '" + decl.name.id + "' declares no atoms");
        }
        return decl;
    }

    // theory NAME : family { world: w; PARAM: value; ... }
    std::optional<TheoryDecl> parse_theory() {
        TheoryDecl decl;
        decl.span = peek().span;
        take();  // theory
        const auto name = expect_ident("theory name");
        if (!name || !expect(TokKind::Colon, "':'")) {
            skip_to_block_start();
            return std::nullopt;
        }
        decl.name = *name;
        const auto family_tok = expect_ident("theory family");
        if (!family_tok) {
            skip_to_block_start();
            return std::nullopt;
        }
        const auto family = family_from_keyword(family_tok->id);
        if (!family) {
            error(family_tok->span, "parse.unknown_family",
                  "unknown theory family '" + family_tok->id + "'");
        } else {
            decl.family = *family;
        }
        if (!expect(TokKind::LBrace, "'{'")) {
            skip_to_block_start();
            return std::nullopt;
        }

        bool saw_world = false;
        std::set<std::string> param_names;
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (!at(TokKind::Ident) || peek(1).kind != TokKind::Colon) {
                error(peek().span, "parse.expected_statement",
                      "expected 'name: value;' in theory body, got " + describe(peek()));
                recover_statement();
                continue;
            }
            const SpannedId key = spanned(take());
            take();  // colon
            if (key.id == "world") {
                const auto world = expect_ident("world name");
                if (!world || !expect(TokKind::Semi, "';'")) {
                    recover_statement();
                    continue;
                }
                if (saw_world) {
                    error(key.span, "parse.duplicate_section",
                          "theory already bound to a world");
                    continue;
                }
                saw_world = true;
                decl.world = *world;
                continue;
            }
            if (!saw_world) {
                error(key.span, "parse.expected_statement",
                      "theory body must start with 'world: NAME;'");
            }
            ParamDecl param;
            param.name = key;
            param.span = key.span;
            const auto value = parse_param_value();
            if (!value || !expect(TokKind::Semi, "';'")) {
                recover_statement();
                continue;
            }
            param.value = *value;
            param.span.end_line = param.value.span.end_line;
            param.span.end_column = param.value.span.end_column;
            if (!param_names.insert(param.name.id).second) {
                error(param.name.span, "resolve.duplicate_entry",
                      "duplicate parameter '" + param.name.id + "'");
                continue;
            }
            decl.params.push_back(std::move(param));
        }
        const auto close = expect(TokKind::RBrace, "'}'");
        if (close) {
            decl.span.end_line = close->span.end_line;
            decl.span.end_column = close->span.end_column;
        }
        if (!saw_world) {
            error(decl.span, "parse.expected_statement",
                  "theory '" + decl.name.id + "' is not bound to a world");
        }
        if (!family) {
            return std::nullopt;
        }
        return decl;
    }

    std::optional<ParamValue> parse_param_value() {
        ParamValue value;
        value.span = peek().span;
        if (at(TokKind::Number)) {
            value.kind = ParamValue::Kind::Number;
            value.number = literal(take());
            value.span = value.number.span;
            return value;
        }
        if (at(TokKind::LParen)) {
            value.kind = ParamValue::Kind::Pairs;
            while (accept(TokKind::LParen)) {
                const auto first = expect_ident("atom name");
                const auto second = expect_ident("atom name");
                if (!first || !second || !expect(TokKind::RParen, "')'")) {
                    return std::nullopt;
                }
                value.pairs.emplace_back(*first, *second);
            }
            if (value.pairs.empty()) {
                error(peek().span, "parse.expected_value", "expected at least one pair");
                return std::nullopt;
            }
            value.span.end_line = value.pairs.back().second.span.end_line;
            value.span.end_column = value.pairs.back().second.span.end_column;
            return value;
        }
        if (!at(TokKind::Ident)) {
            error(peek().span, "parse.expected_value",
                  "expected a parameter value, got " + describe(peek()));
            return std::nullopt;
        }
        const SpannedId head = spanned(take());
        if (head.id == "all" && !at(TokKind::LParen)) {
            value.kind = ParamValue::Kind::All;
            value.span = head.span;
            return value;
        }
        if (head.id == "none" && !at(TokKind::LParen)) {
            value.kind = ParamValue::Kind::None;
            value.span = head.span;
            return value;
        }
        if ((head.id == "edges" || head.id == "atoms") && at(TokKind::LParen)) {
            take();
            value.kind = head.id == "edges" ? ParamValue::Kind::EdgeSet
                                            : ParamValue::Kind::AtomSet;
            while (at(TokKind::Ident)) {
                value.ids.push_back(spanned(take()));
            }
            const auto close = expect(TokKind::RParen, "')'");
            if (!close) {
                return std::nullopt;
            }
            value.span = head.span;
            value.span.end_line = close->span.end_line;
            value.span.end_column = close->span.end_column;
            return value;
        }
        if (head.id == "threshold" && at(TokKind::LParen)) {
            take();
            value.kind = ParamValue::Kind::Threshold;
            const auto attr = expect_ident("attribute name");
            const auto cut = expect(TokKind::Number, "number");
            if (!attr || !cut) {
                return std::nullopt;
            }
            const auto close = expect(TokKind::RParen, "')'");
            if (!close) {
                return std::nullopt;
            }
            value.ident = *attr;
            value.number = literal(*cut);
            value.span = head.span;
            value.span.end_line = close->span.end_line;
            value.span.end_column = close->span.end_column;
            return value;
        }
        value.kind = ParamValue::Kind::Ident;
        value.ident = head;
        value.span = head.span;
        return value;
    }

    // map NAME { a -> b; ... }
    std::optional<MapDecl> parse_map() {
        MapDecl decl;
        decl.span = peek().span;
        take();  // map
        const auto name = expect_ident("map name");
        if (!name || !expect(TokKind::LBrace, "'{'")) {
            skip_to_block_start();
            return std::nullopt;
        }
        decl.name = *name;
        std::set<std::string> sources;
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            const auto from = expect_ident("source id");
            if (!from || !expect(TokKind::Arrow, "'->'")) {
                recover_statement();
                continue;
            }
            const auto to = expect_ident("target id");
            if (!to || !expect(TokKind::Semi, "';'")) {
                recover_statement();
                continue;
            }
            if (!sources.insert(from->id).second) {
                error(from->span, "resolve.duplicate_entry",
                      "'" + from->id + "' is mapped twice");
                continue;
            }
            decl.entries.emplace_back(*from, *to);
        }
        const auto close = expect(TokKind::RBrace, "'}'");
        if (close) {
            decl.span.end_line = close->span.end_line;
            decl.span.end_column = close->span.end_column;
        }
        if (decl.entries.empty()) {
            error(decl.span, "parse.empty_block",
                  "map '" + decl.name.id + "' has no entries");
        }
        return decl;
    }

    // experiment NAME { N = 1000; alpha = 50; ... }
    std::optional<ExperimentDecl> parse_experiment() {
        static const std::set<std::string> keys = {"N", "alpha", "beta", "trials", "seed"};
        ExperimentDecl decl;
        decl.span = peek().span;
        take();  // experiment
        const auto name = expect_ident("experiment name");
        if (!name || !expect(TokKind::LBrace, "'{'")) {
            skip_to_block_start();
            return std::nullopt;
        }
        decl.name = *name;
        std::set<std::string> seen;
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            const auto key = expect_ident("parameter name");
            if (!key) {
                recover_statement();
                continue;
            }
            if (keys.count(key->id) == 0) {
                error(key->span, "parse.unknown_key",
                      "unknown experiment parameter '" + key->id +
                          "' (expected N, alpha, beta, trials, or seed)");
                recover_statement();
                continue;
            }
            if (!expect(TokKind::Equals, "'='")) {
                recover_statement();
                continue;
            }
            const auto value = expect(TokKind::Number, "number");
            if (!value || !expect(TokKind::Semi, "';'")) {
                recover_statement();
                continue;
            }
            while (accept(TokKind::Semi)) {
            }
            if (!seen.insert(key->id).second) {
                error(key->span, "resolve.duplicate_key",
                      "experiment parameter '" + key->id + "' set twice");
                continue;
            }
            decl.entries.push_back(ExperimentEntry{*key, literal(*value)});
        }
        const auto close = expect(TokKind::RBrace, "'}'");
        if (close) {
            decl.span.end_line = close->span.end_line;
            decl.span.end_column = close->span.end_column;
        }
        if (decl.entries.empty()) {
            error(decl.span, "parse.empty_block",
                  "experiment '" + decl.name.id + "' sets no parameters");
        }
        return decl;
    }

    // concepts NAME { id = {1 2}; ... compose c = a + b; ... }
    std::optional<ConceptsDecl> parse_concepts() {
        ConceptsDecl decl;
        decl.span = peek().span;
        take();  // concepts
        const auto name = expect_ident("concepts block name");
        if (!name || !expect(TokKind::LBrace, "'{'")) {
            skip_to_block_start();
            return std::nullopt;
        }
        decl.name = *name;
        std::set<std::string> member_names;
        std::set<std::string> composed;
        bool in_compose_section = false;
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (at_keyword("compose") && peek(1).kind == TokKind::Ident) {
                take();
                in_compose_section = true;
                ComposeDecl comp;
                const auto result = expect_ident("composed concept");
                if (!result || !expect(TokKind::Equals, "'='")) {
                    recover_statement();
                    continue;
                }
                const auto a = expect_ident("component concept");
                if (!a || !expect(TokKind::Plus, "'+'")) {
                    recover_statement();
                    continue;
                }
                const auto b = expect_ident("component concept");
                if (!b || !expect(TokKind::Semi, "';'")) {
                    recover_statement();
                    continue;
                }
                comp.result = *result;
                comp.a = *a;
                comp.b = *b;
                for (const auto* ref : {&comp.result, &comp.a, &comp.b}) {
                    if (member_names.count(ref->id) == 0) {
                        error(ref->span, "resolve.unknown_reference",
                              "unknown concept '" + ref->id + "'");
                    }
                }
                if (comp.result.id == comp.a.id || comp.result.id == comp.b.id) {
                    error(comp.result.span, "resolve.self_composition",
                          "'" + comp.result.id + "' cannot compose itself");
                    continue;
                }
                if (!composed.insert(comp.result.id).second) {
                    error(comp.result.span, "resolve.duplicate_composition",
                          "'" + comp.result.id + "' already has a composition");
                    continue;
                }
                decl.compositions.push_back(std::move(comp));
                continue;
            }
            if (!at(TokKind::Ident)) {
                error(peek().span, "parse.expected_statement",
                      "expected a concept declaration, got " + describe(peek()));
                recover_statement();
                continue;
            }
            if (in_compose_section) {
                error(peek().span, "parse.member_after_compose",
                      "concept members must precede compose declarations");
                recover_statement();
                continue;
            }
            ConceptDecl member;
            member.name = spanned(take());
            if (!expect(TokKind::Equals, "'='") || !expect(TokKind::LBrace, "'{'")) {
                recover_statement();
                continue;
            }
            if (!at(TokKind::Number)) {
                error(peek().span, "parse.expected_token",
                      "expected at least one neuron index, got " + describe(peek()));
                recover_statement();
                continue;
            }
            bool bad_index = false;
            while (at(TokKind::Number)) {
                const NumberLit lit = literal(take());
                if (!lit.is_integer() || lit.value < 0) {
                    error(lit.span, "resolve.not_integer",
                          "neuron index must be a non-negative integer");
                    bad_index = true;
                }
                member.neurons.push_back(lit);
            }
            if (!expect(TokKind::RBrace, "'}'") || !expect(TokKind::Semi, "';'")) {
                recover_statement();
                continue;
            }
            if (bad_index) {
                continue;
            }
            if (!member_names.insert(member.name.id).second) {
                error(member.name.span, "resolve.duplicate_name",
                      "duplicate concept '" + member.name.id + "'");
                continue;
            }
            decl.members.push_back(std::move(member));
        }
        const auto close = expect(TokKind::RBrace, "'}'");
        if (close) {
            decl.span.end_line = close->span.end_line;
            decl.span.end_column = close->span.end_column;
        }
        if (decl.members.empty()) {
            error(decl.span, "parse.empty_block",
                  "concepts block '" + decl.name.id + "' declares no concepts");
        }
        return decl;
    }

    std::vector<Token> tokens_;
    std::vector<Diagnostic>* diags_;
    std::size_t pos_ = 0;
};

// Cross-block resolution: names unique per kind, theory references bound.
inline void resolve(const Document& doc, std::vector<Diagnostic>* diags) {
    const auto error = [&](Span span, std::string code, std::string message) {
        diags->push_back(Diagnostic{Diagnostic::Severity::Error, span, std::move(code),
                                    std::move(message)});
    };

    std::set<std::string> worlds, theories, maps, experiments, concept_blocks;
    const auto check_unique = [&](std::set<std::string>& names, const SpannedId& name,
                                  const char* kind) {
        if (!names.insert(name.id).second) {
            error(name.span, "resolve.duplicate_name",
                  std::string("duplicate ") + kind + " '" + name.id + "'");
        }
    };
    for (const auto& block : doc.blocks) {
        if (const auto* w = std::get_if<WorldDecl>(&block)) {
            check_unique(worlds, w->name, "world");
        } else if (const auto* t = std::get_if<TheoryDecl>(&block)) {
            check_unique(theories, t->name, "theory");
        } else if (const auto* m = std::get_if<MapDecl>(&block)) {
            check_unique(maps, m->name, "map");
        } else if (const auto* e = std::get_if<ExperimentDecl>(&block)) {
            check_unique(experiments, e->name, "experiment");
        } else if (const auto* c = std::get_if<ConceptsDecl>(&block)) {
            check_unique(concept_blocks, c->name, "concepts block");
        }
    }

    for (const auto* t : blocks_of<TheoryDecl>(doc)) {
        const WorldDecl* world = find_block<WorldDecl>(doc, t->world.id);
        if (t->world.id.empty()) {
            continue;  // already reported by the parser
        }
        if (world == nullptr) {
            error(t->world.span, "resolve.unknown_reference",
                  "unknown world '" + t->world.id + "'");
            continue;
        }
        std::set<std::string> atom_names;
        std::set<std::string> edge_names;
        for (const auto& a : world->atoms) {
            atom_names.insert(a.id);
        }
        for (const auto& e : world->edges) {
            edge_names.insert(e.name.id);
        }
        for (const auto& param : t->params) {
            const auto& v = param.value;
            if (v.kind == ParamValue::Kind::EdgeSet) {
                for (const auto& id : v.ids) {
                    if (edge_names.count(id.id) == 0) {
                        error(id.span, "resolve.unknown_edge",
                              "unresolved edge '" + id.id + "'");
                    }
                }
            } else if (v.kind == ParamValue::Kind::AtomSet) {
                for (const auto& id : v.ids) {
                    if (atom_names.count(id.id) == 0) {
                        error(id.span, "resolve.unknown_atom",
                              "unresolved atom '" + id.id + "'");
                    }
                }
            } else if (v.kind == ParamValue::Kind::Pairs) {
                for (const auto& [from, to] : v.pairs) {
                    for (const auto* endpoint : {&from, &to}) {
                        if (atom_names.count(endpoint->id) == 0) {
                            error(endpoint->span, "resolve.unknown_atom",
                                  "unresolved atom '" + endpoint->id + "'");
                        }
                    }
                }
            }
        }
    }

    for (const auto* e : blocks_of<ExperimentDecl>(doc)) {
        for (const auto& entry : e->entries) {
            if (!entry.value.is_integer() || entry.value.value < 0) {
                error(entry.value.span, "resolve.not_integer",
                      "experiment parameter '" + entry.key.id +
                          "' must be a non-negative integer");
            }
        }
    }
}

} // namespace detail

inline ParseResult parse(const std::string& text) {
    ParseResult result;
    detail::Lexer lexer(text, &result.diagnostics);
    detail::Parser parser(lexer.run(), &result.diagnostics);
    result.document = parser.run();
    detail::resolve(result.document, &result.diagnostics);
    return result;
}

namespace detail {

inline std::string render_number(double v) {
    char buf[64];
    if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) <= 9007199254740992.0) {
        const auto r = std::to_chars(buf, buf + sizeof(buf), static_cast<long long>(v));
        return std::string(buf, r.ptr);
    }
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

inline std::vector<std::string> sorted_ids(const std::vector<SpannedId>& ids) {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        out.push_back(id.id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            out += sep;
        }
        out += parts[i];
    }
    return out;
}

inline std::string render_param_value(const ParamValue& v) {
    switch (v.kind) {
    case ParamValue::Kind::Number:
        return render_number(v.number.value);
    case ParamValue::Kind::Ident:
        return v.ident.id;
    case ParamValue::Kind::EdgeSet:
        return "edges(" + join(sorted_ids(v.ids), " ") + ")";
    case ParamValue::Kind::AtomSet:
        return "atoms(" + join(sorted_ids(v.ids), " ") + ")";
    case ParamValue::Kind::Threshold:
        return "threshold(" + v.ident.id + " " + render_number(v.number.value) + ")";
    case ParamValue::Kind::All:
        return "all";
    case ParamValue::Kind::None:
        return "none";
    case ParamValue::Kind::Pairs: {
        std::vector<std::pair<std::string, std::string>> pairs;
        for (const auto& [a, b] : v.pairs) {
            pairs.emplace_back(a.id, b.id);
        }
        std::sort(pairs.begin(), pairs.end());
        std::vector<std::string> parts;
        for (const auto& [a, b] : pairs) {
            parts.push_back("(" + a + " " + b + ")");
        }
        return join(parts, " ");
    }
    }
    return "";
}

inline void serialize_block(const WorldDecl& w, std::string& out) {
    out += "world " + w.name.id + " {\n";
    out += "  atoms: " + join(sorted_ids(w.atoms), " ") + ";\n";
    if (!w.edges.empty()) {
        std::vector<const EdgeDecl*> edges;
        for (const auto& e : w.edges) {
            edges.push_back(&e);
        }
        std::sort(edges.begin(), edges.end(), [](const EdgeDecl* a, const EdgeDecl* b) {
            return a->name.id < b->name.id;
        });
        std::vector<std::string> parts;
        for (const auto* e : edges) {
            if (e->ordered) {
                parts.push_back(e->name.id + " = (" + e->members[0].id + " " +
                                e->members[1].id + ")");
            } else {
                std::vector<std::string> members = sorted_ids(e->members);
                parts.push_back(e->name.id + " = {" + join(members, " ") + "}");
            }
        }
        out += "  edges: " + join(parts, " ") + ";\n";
    }
    std::vector<const AttrDecl*> attrs;
    for (const auto& a : w.attrs) {
        attrs.push_back(&a);
    }
    std::sort(attrs.begin(), attrs.end(), [](const AttrDecl* a, const AttrDecl* b) {
        return std::make_pair(a->attribute.id, a->edge.id) <
               std::make_pair(b->attribute.id, b->edge.id);
    });
    for (const auto* a : attrs) {
        out += "  attr " + a->attribute.id + " : " + a->edge.id + " = " +
               render_number(a->value.value) + ";\n";
    }
    out += "}\n";
}

inline void serialize_block(const TheoryDecl& t, std::string& out) {
    out += "theory " + t.name.id + " : " + to_string(t.family) + " {\n";
    out += "  world: " + t.world.id + ";\n";
    std::vector<const ParamDecl*> params;
    for (const auto& p : t.params) {
        params.push_back(&p);
    }
    std::sort(params.begin(), params.end(), [](const ParamDecl* a, const ParamDecl* b) {
        return a->name.id < b->name.id;
    });
    for (const auto* p : params) {
        out += "  " + p->name.id + ": " + render_param_value(p->value) + ";\n";
    }
    out += "}\n";
}

inline void serialize_block(const MapDecl& m, std::string& out) {
    out += "map " + m.name.id + " {\n";
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& [from, to] : m.entries) {
        entries.emplace_back(from.id, to.id);
    }
    std::sort(entries.begin(), entries.end());
    for (const auto& [from, to] : entries) {
        out += "  " + from + " -> " + to + ";\n";
    }
    out += "}\n";
}

inline void serialize_block(const ExperimentDecl& e, std::string& out) {
    out += "experiment " + e.name.id + " {\n";
    std::vector<std::pair<std::string, double>> entries;
    for (const auto& entry : e.entries) {
        entries.emplace_back(entry.key.id, entry.value.value);
    }
    std::sort(entries.begin(), entries.end());
    for (const auto& [key, value] : entries) {
        out += "  " + key + " = " + render_number(value) + ";\n";
    }
    out += "}\n";
}

inline void serialize_block(const ConceptsDecl& c, std::string& out) {
    out += "concepts " + c.name.id + " {\n";
    std::vector<const ConceptDecl*> members;
    for (const auto& m : c.members) {
        members.push_back(&m);
    }
    std::sort(members.begin(), members.end(), [](const ConceptDecl* a, const ConceptDecl* b) {
        return a->name.id < b->name.id;
    });
    for (const auto* m : members) {
        std::vector<double> values;
        for (const auto& n : m->neurons) {
            values.push_back(n.value);
        }
        std::sort(values.begin(), values.end());
        std::vector<std::string> parts;
        for (const double v : values) {
            parts.push_back(render_number(v));
        }
        out += "  " + m->name.id + " = {" + join(parts, " ") + "};\n";
    }
    std::vector<const ComposeDecl*> comps;
    for (const auto& comp : c.compositions) {
        comps.push_back(&comp);
    }
    std::sort(comps.begin(), comps.end(), [](const ComposeDecl* a, const ComposeDecl* b) {
        return a->result.id < b->result.id;
    });
    for (const auto* comp : comps) {
        out += "  compose " + comp->result.id + " = " + comp->a.id + " + " + comp->b.id + ";\n";
    }
    out += "}\n";
}

} // namespace detail

// Canonical form: blocks in document order separated by blank lines, member
// lists sorted, shortest round-trip numbers, LF line endings. Idempotent:
// serializing a reparse of the output reproduces it byte for byte.
inline std::string serialize(const Document& doc) {
    std::string out;
    bool first = true;
    for (const auto& block : doc.blocks) {
        if (!first) {
            out += "\n";
        }
        first = false;
        std::visit([&out](const auto& decl) { detail::serialize_block(decl, out); }, block);
    }
    return out;
}

inline bool structurally_equal(const Document& a, const Document& b) {
    return serialize(a) == serialize(b);
}

// Binders into the core types. These assume a document that parsed without
// errors; contract violations throw.

inline World to_world(const WorldDecl& decl) {
    std::vector<std::string> atoms;
    for (const auto& a : decl.atoms) {
        atoms.push_back(a.id);
    }
    std::vector<Edge> edges;
    for (const auto& e : decl.edges) {
        Edge edge;
        edge.id = e.name.id;
        for (const auto& m : e.members) {
            edge.members.push_back(m.id);
        }
        edge.ordered = e.ordered;
        edges.push_back(std::move(edge));
    }
    std::map<std::string, std::map<std::string, double>> attributes;
    for (const auto& a : decl.attrs) {
        attributes[a.edge.id][a.attribute.id] = a.value.value;
    }
    return build_world(atoms, edges, attributes);
}

namespace detail {

inline PredicateDef to_predicate(const ParamValue& value) {
    switch (value.kind) {
    case ParamValue::Kind::EdgeSet: {
        std::vector<std::string> ids;
        for (const auto& id : value.ids) {
            ids.push_back(id.id);
        }
        return PredicateDef::explicit_edges(ids);
    }
    case ParamValue::Kind::Threshold:
        return PredicateDef::attribute_threshold(value.ident.id, value.number.value);
    case ParamValue::Kind::All:
        return PredicateDef::always_true();
    case ParamValue::Kind::None:
        return PredicateDef::always_false();
    default:
        throw std::invalid_argument("parameter is not a predicate");
    }
}

} // namespace detail

// Builds the declared world, registers predicate-valued parameters under
// "<theory>.<param>", and instantiates the family.
inline TheoryInstance instantiate(const Document& doc, const TheoryDecl& decl) {
    const WorldDecl* world_decl = find_block<WorldDecl>(doc, decl.world.id);
    if (world_decl == nullptr) {
        throw std::invalid_argument("instantiate: unknown world '" + decl.world.id + "'");
    }

    std::vector<std::string> atoms;
    for (const auto& a : world_decl->atoms) {
        atoms.push_back(a.id);
    }
    std::vector<Edge> edges;
    for (const auto& e : world_decl->edges) {
        Edge edge;
        edge.id = e.name.id;
        for (const auto& m : e.members) {
            edge.members.push_back(m.id);
        }
        edge.ordered = e.ordered;
        edges.push_back(std::move(edge));
    }
    std::map<std::string, std::map<std::string, double>> attributes;
    for (const auto& a : world_decl->attrs) {
        attributes[a.edge.id][a.attribute.id] = a.value.value;
    }

    TheoryOptions options;
    std::map<std::string, PredicateDef> predicates;
    for (const auto& param : decl.params) {
        const std::string& key = param.name.id;
        if (key == "Q" || key == "Q_I" || key == "Q_M") {
            const std::string predicate_name = decl.name.id + "." + key;
            predicates.emplace(predicate_name, detail::to_predicate(param.value));
            if (key == "Q") {
                options.q = predicate_name;
            } else if (key == "Q_I") {
                options.q_mental = predicate_name;
            } else {
                options.q_material = predicate_name;
            }
        } else if (key == "tau") {
            if (param.value.kind != ParamValue::Kind::Number) {
                throw std::invalid_argument("instantiate: tau must be a number");
            }
            options.tau = param.value.number.value;
        } else if (key == "attribute") {
            if (param.value.kind != ParamValue::Kind::Ident) {
                throw std::invalid_argument("instantiate: attribute must be a name");
            }
            options.phi_attribute = param.value.ident.id;
        } else if (key == "mental" || key == "material") {
            if (param.value.kind != ParamValue::Kind::AtomSet) {
                throw std::invalid_argument("instantiate: " + key + " must be atoms(...)");
            }
            std::vector<std::string>& side = key == "mental" ? options.mental : options.material;
            for (const auto& id : param.value.ids) {
                side.push_back(id.id);
            }
        } else if (key == "links") {
            if (param.value.kind != ParamValue::Kind::Pairs) {
                throw std::invalid_argument("instantiate: links must be a pair list");
            }
            for (const auto& [from, to] : param.value.pairs) {
                options.links.emplace_back(from.id, to.id);
            }
        }
        // Other parameters are ignored here; check() flags them.
    }

    const World world = build_world(atoms, edges, attributes, predicates);
    return instantiate_theory(decl.family, world, options);
}

inline ConceptSpace to_concept_space(const ConceptsDecl& decl) {
    int max_index = -1;
    std::vector<std::pair<std::string, std::vector<int>>> correlates;
    for (const auto& member : decl.members) {
        std::vector<int> indices;
        for (const auto& lit : member.neurons) {
            if (!lit.is_integer() || lit.value < 0) {
                throw std::invalid_argument("to_concept_space: neuron index must be a non-negative integer");
            }
            const int index = static_cast<int>(lit.value);
            indices.push_back(index);
            max_index = std::max(max_index, index);
        }
        correlates.emplace_back(member.name.id, std::move(indices));
    }
    if (max_index < 0) {
        throw std::invalid_argument("to_concept_space: block declares no neurons");
    }
    ConceptSpace space = make_concept_space(max_index + 1, correlates);
    for (const auto& comp : decl.compositions) {
        compose_concept(space, comp.a.id, comp.b.id, comp.result.id);
    }
    return space;
}

struct ExperimentConfig {
    ComposeParams params;
    long long trials = 0;
    std::uint64_t seed = 0;
    bool has_trials = false;
    bool has_seed = false;
};

inline ExperimentConfig to_config(const ExperimentDecl& decl) {
    std::map<std::string, double> values;
    for (const auto& entry : decl.entries) {
        values[entry.key.id] = entry.value.value;
    }
    for (const char* required : {"N", "alpha", "beta"}) {
        if (values.find(required) == values.end()) {
            throw std::invalid_argument(std::string("to_config: experiment is missing '") +
                                        required + "'");
        }
    }
    ExperimentConfig config;
    config.params.neuron_count = static_cast<int>(values["N"]);
    config.params.alpha = static_cast<int>(values["alpha"]);
    config.params.beta = static_cast<int>(values["beta"]);
    validate_params(config.params);
    if (values.count("trials") > 0) {
        config.trials = static_cast<long long>(values["trials"]);
        config.has_trials = true;
    }
    if (values.count("seed") > 0) {
        config.seed = static_cast<std::uint64_t>(values["seed"]);
        config.has_seed = true;
    }
    return config;
}

namespace detail {

inline void check_theory(const Document& doc, const TheoryDecl& t,
                         std::vector<Diagnostic>* diags) {
    const auto add = [&](Diagnostic::Severity severity, Span span, std::string code,
                         std::string message) {
        diags->push_back(Diagnostic{severity, span, std::move(code), std::move(message)});
    };
    const auto find_param = [&](const char* name) -> const ParamDecl* {
        for (const auto& p : t.params) {
            if (p.name.id == name) {
                return &p;
            }
        }
        return nullptr;
    };
    const auto is_predicate = [](const ParamValue& v) {
        return v.kind == ParamValue::Kind::EdgeSet || v.kind == ParamValue::Kind::Threshold ||
               v.kind == ParamValue::Kind::All || v.kind == ParamValue::Kind::None;
    };
    const auto require_predicate = [&](const char* name) {
        const ParamDecl* p = find_param(name);
        if (p == nullptr) {
            add(Diagnostic::Severity::Error, t.span, "check.missing_param",
                "theory '" + t.name.id + "' requires parameter '" + name + "'");
        } else if (!is_predicate(p->value)) {
            add(Diagnostic::Severity::Error, p->span, "check.bad_param",
                "parameter '" + std::string(name) + "' must be a predicate");
        }
    };

    const WorldDecl* world = find_block<WorldDecl>(doc, t.world.id);
    std::set<std::string> allowed;

    switch (t.family) {
    case TheoryFamily::Materialism:
    case TheoryFamily::Idealism:
        allowed = {"Q"};
        require_predicate("Q");
        break;
    case TheoryFamily::Panpsychism: {
        allowed = {"Q"};
        const ParamDecl* q = find_param("Q");
        if (q != nullptr && q->value.kind != ParamValue::Kind::All) {
            add(Diagnostic::Severity::Warning, q->span, "check.panpsychism_q",
                "panpsychism expects Q to hold for every relation");
        }
        break;
    }
    case TheoryFamily::IIT: {
        allowed = {"tau", "attribute"};
        const ParamDecl* tau = find_param("tau");
        if (tau == nullptr) {
            add(Diagnostic::Severity::Error, t.span, "check.missing_param",
                "theory '" + t.name.id + "' requires parameter 'tau'");
        } else if (tau->value.kind != ParamValue::Kind::Number) {
            add(Diagnostic::Severity::Error, tau->span, "check.bad_param",
                "parameter 'tau' must be a number");
        }
        const ParamDecl* attr = find_param("attribute");
        std::string attr_name = "phi";
        if (attr != nullptr) {
            if (attr->value.kind != ParamValue::Kind::Ident) {
                add(Diagnostic::Severity::Error, attr->span, "check.bad_param",
                    "parameter 'attribute' must be a name");
            } else {
                attr_name = attr->value.ident.id;
            }
        }
        if (world != nullptr) {
            for (const auto& edge : world->edges) {
                bool covered = false;
                for (const auto& a : world->attrs) {
                    if (a.attribute.id == attr_name && a.edge.id == edge.name.id) {
                        covered = true;
                        break;
                    }
                }
                if (!covered) {
                    add(Diagnostic::Severity::Error, t.span, "check.iit_attr",
                        "edge '" + edge.name.id + "' has no '" + attr_name + "' attribute");
                }
            }
        }
        break;
    }
    case TheoryFamily::NeutralMonism:
        allowed = {"Q_I", "Q_M"};
        require_predicate("Q_I");
        require_predicate("Q_M");
        break;
    case TheoryFamily::DualismNaive:
    case TheoryFamily::DualismInteractionist: {
        allowed = {"mental", "material"};
        if (t.family == TheoryFamily::DualismInteractionist) {
            allowed.insert("links");
        }
        std::vector<std::string> mental;
        std::vector<std::string> material;
        for (const char* name : {"mental", "material"}) {
            const ParamDecl* p = find_param(name);
            if (p == nullptr) {
                add(Diagnostic::Severity::Error, t.span, "check.missing_param",
                    "theory '" + t.name.id + "' requires parameter '" + name + "'");
            } else if (p->value.kind != ParamValue::Kind::AtomSet) {
                add(Diagnostic::Severity::Error, p->span, "check.bad_param",
                    "parameter '" + std::string(name) + "' must be atoms(...)");
            } else {
                auto& side = std::string(name) == "mental" ? mental : material;
                for (const auto& id : p->value.ids) {
                    side.push_back(id.id);
                }
            }
        }
        const std::vector<std::string> overlap = id_intersection(mental, material);
        if (!overlap.empty()) {
            const ParamDecl* p = find_param("material");
            add(Diagnostic::Severity::Error, p != nullptr ? p->span : t.span,
                "check.dualism_overlap",
                "mental and material sets must share no member; '" + overlap.front() +
                    "' is in both");
        }
        const ParamDecl* links = find_param("links");
        if (t.family == TheoryFamily::DualismNaive) {
            if (links != nullptr) {
                add(Diagnostic::Severity::Error, links->span, "check.dualism_links",
                    "naive dualism admits no links");
            }
        } else if (links != nullptr && links->value.kind == ParamValue::Kind::Pairs) {
            for (const auto& [from, to] : links->value.pairs) {
                const bool from_mental = contains(mental, from.id);
                const bool from_material = contains(material, from.id);
                const bool to_mental = contains(mental, to.id);
                const bool to_material = contains(material, to.id);
                if (!((from_mental && to_material) || (from_material && to_mental))) {
                    add(Diagnostic::Severity::Error, from.span, "check.link_sides",
                        "link (" + from.id + ", " + to.id +
                            ") must cross the mental/material divide");
                }
            }
        }
        break;
    }
    case TheoryFamily::Russellian:
        if (world != nullptr) {
            for (const auto& edge : world->edges) {
                if (!edge.ordered) {
                    add(Diagnostic::Severity::Error, edge.name.span, "check.russellian_ordered",
                        "russellian theories require ordered edges; '" + edge.name.id +
                            "' is unordered");
                }
            }
        }
        break;
    case TheoryFamily::Solipsism:
    case TheoryFamily::IllusionismHard:
        break;
    }

    for (const auto& p : t.params) {
        if (allowed.count(p.name.id) == 0) {
            add(Diagnostic::Severity::Warning, p.span, "check.unused_param",
                "parameter '" + p.name.id + "' is not used by this family");
        }
    }
}

} // namespace detail

// Semantic validation beyond parsing: family parameter requirements and
// experiment ranges. Errors mean the document cannot be instantiated;
// warnings flag suspicious but usable declarations.
inline std::vector<Diagnostic> check(const Document& doc) {
    std::vector<Diagnostic> diags;
    for (const auto* t : blocks_of<TheoryDecl>(doc)) {
        detail::check_theory(doc, *t, &diags);
    }
    for (const auto* e : blocks_of<ExperimentDecl>(doc)) {
        std::map<std::string, double> values;
        for (const auto& entry : e->entries) {
            values[entry.key.id] = entry.value.value;
        }
        const auto fail = [&](const std::string& message) {
            diags.push_back(Diagnostic{Diagnostic::Severity::Error, e->span, "check.range",
                                       message});
        };
        if (values.count("N") > 0 && values["N"] < 1) {
            fail("experiment '" + e->name.id + "': N must be at least 1");
        }
        if (values.count("alpha") > 0 && values.count("beta") > 0 &&
            values["beta"] > values["alpha"]) {
            fail("experiment '" + e->name.id + "': beta must not exceed alpha");
        }
        if (values.count("alpha") > 0 && values.count("N") > 0 &&
            values["alpha"] > values["N"]) {
            fail("experiment '" + e->name.id + "': alpha must not exceed N");
        }
        if (values.count("trials") > 0 && values["trials"] < 1) {
            fail("experiment '" + e->name.id + "': trials must be at least 1");
        }
    }
    return diags;
}

} // namespace mmk::speclang
