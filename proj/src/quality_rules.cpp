#include "curator/quality_rules.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "curator/util.hpp"

namespace curator {

namespace {

LanguageSyntax c_like() {
    LanguageSyntax s;
    s.line_comments = {"//"};
    s.block_comments = {{"/*", "*/"}};
    s.strings = {{"\"", "\"", true, false}, {"'", "'", true, false}};
    s.branch_keywords = {"if", "for", "while", "case", "catch"};
    s.branch_operators = {"&&", "||", "?"};
    return s;
}

LanguageSyntax hash_line_only() {
    LanguageSyntax s;
    s.line_comments = {"#"};
    s.strings = {{"\"", "\"", true, false}, {"'", "'", true, false}};
    s.branch_keywords = {"if", "for", "while", "case"};
    s.branch_operators = {"&&", "||"};
    return s;
}

}  // namespace

SyntaxTable SyntaxTable::defaults() {
    SyntaxTable t;

    LanguageSyntax def = c_like();
    def.line_comments = {"//", "#"};
    t.table_["default"] = def;

    LanguageSyntax python;
    python.line_comments = {"#"};
    // Triple-quoted spans are treated as block comments: docstrings count
    // toward documentation the way block comments do elsewhere.
    python.block_comments = {{"\"\"\"", "\"\"\""}, {"'''", "'''"}};
    python.strings = {{"\"", "\"", true, false}, {"'", "'", true, false}};
    python.branch_keywords = {"if", "elif", "for", "while", "except", "and", "or"};
    t.table_["python"] = python;

    for (const char* lang : {"c", "cpp", "java", "c-sharp", "kotlin", "scala", "swift",
                             "dart", "groovy", "java-server-pages"}) {
        t.table_[lang] = c_like();
    }

    LanguageSyntax js = c_like();
    js.strings.push_back({"`", "`", true, true});
    t.table_["javascript"] = js;
    t.table_["typescript"] = js;

    LanguageSyntax go = c_like();
    go.strings.push_back({"`", "`", false, true});
    go.branch_keywords = {"if", "for", "case", "select"};
    go.branch_operators = {"&&", "||"};
    t.table_["go"] = go;

    LanguageSyntax rust = c_like();
    rust.branch_keywords = {"if", "for", "while", "match"};
    rust.branch_operators = {"&&", "||"};
    t.table_["rust"] = rust;

    LanguageSyntax php = c_like();
    php.line_comments = {"//", "#"};
    php.branch_keywords = {"if", "elseif", "for", "foreach", "while", "case", "catch"};
    t.table_["php"] = php;

    LanguageSyntax ruby = hash_line_only();
    ruby.block_comments = {{"=begin", "=end"}};
    ruby.branch_keywords = {"if", "elsif", "unless", "while", "until", "for",
                            "when", "rescue", "and", "or"};
    ruby.branch_operators = {"&&", "||"};
    t.table_["ruby"] = ruby;

    LanguageSyntax shell = hash_line_only();
    shell.branch_keywords = {"if", "elif", "for", "while", "until", "case"};
    shell.branch_operators = {"&&", "||"};
    t.table_["shell"] = shell;
    t.table_["perl"] = shell;
    t.table_["r"] = hash_line_only();
    t.table_["yaml"] = hash_line_only();
    t.table_["makefile"] = hash_line_only();
    t.table_["powershell"] = hash_line_only();

    LanguageSyntax lua;
    lua.line_comments = {"--"};
    lua.block_comments = {{"--[[", "]]"}};
    lua.strings = {{"\"", "\"", true, false}, {"'", "'", true, false}};
    lua.branch_keywords = {"if", "elseif", "for", "while", "repeat", "and", "or"};
    t.table_["lua"] = lua;

    LanguageSyntax haskell;
    haskell.line_comments = {"--"};
    haskell.block_comments = {{"{-", "-}"}};
    haskell.strings = {{"\"", "\"", true, false}};
    haskell.branch_keywords = {"if", "case"};
    t.table_["haskell"] = haskell;

    LanguageSyntax sql;
    sql.line_comments = {"--"};
    sql.block_comments = {{"/*", "*/"}};
    sql.strings = {{"'", "'", false, false}};
    sql.branch_keywords = {"case", "when"};
    t.table_["sql"] = sql;

    LanguageSyntax markup;
    markup.block_comments = {{"<!--", "-->"}};
    t.table_["html"] = markup;
    t.table_["markdown"] = markup;
    t.table_["xml"] = markup;

    LanguageSyntax css;
    css.block_comments = {{"/*", "*/"}};
    css.strings = {{"\"", "\"", true, false}, {"'", "'", true, false}};
    t.table_["css"] = css;

    LanguageSyntax tex;
    tex.line_comments = {"%"};
    t.table_["tex"] = tex;
    t.table_["erlang"] = tex;

    LanguageSyntax lisp;
    lisp.line_comments = {";"};
    lisp.block_comments = {{"#|", "|#"}};
    lisp.strings = {{"\"", "\"", true, false}};
    lisp.branch_keywords = {"if", "cond", "when", "unless", "loop"};
    t.table_["common-lisp"] = lisp;

    LanguageSyntax pascal;
    pascal.line_comments = {"//"};
    pascal.block_comments = {{"{", "}"}, {"(*", "*)"}};
    pascal.strings = {{"'", "'", false, false}};
    pascal.branch_keywords = {"if", "for", "while", "case", "repeat"};
    t.table_["pascal"] = pascal;

    return t;
}

SyntaxTable SyntaxTable::load(const std::filesystem::path& file) {
    SyntaxTable t = defaults();
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open syntax table: " + file.string());
    std::string line;
    size_t lineno = 0;
    std::set<std::string> reset;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        size_t start = 0;
        while (true) {
            const size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        auto fail = [&](const char* why) {
            throw ConfigError("syntax table " + file.string() + ":" + std::to_string(lineno) +
                              ": " + why);
        };
        if (fields.size() < 3) fail("expected lang<TAB>kind<TAB>entry");
        const std::string& lang = fields[0];
        const std::string& kind = fields[1];
        if (reset.insert(lang).second) t.table_[lang] = LanguageSyntax{};
        LanguageSyntax& s = t.table_[lang];
        if (kind == "line") {
            s.line_comments.push_back(fields[2]);
        } else if (kind == "block") {
            if (fields.size() < 4) fail("block needs open and close");
            s.block_comments.emplace_back(fields[2], fields[3]);
        } else if (kind == "string") {
            if (fields.size() < 4) fail("string needs open and close");
            StringDelim d{fields[2], fields[3], true, false};
            for (size_t i = 4; i < fields.size(); ++i) {
                if (fields[i] == "raw") d.escapes = false;
                else if (fields[i] == "multiline") d.multiline = true;
                else fail("unknown string flag");
            }
            s.strings.push_back(d);
        } else if (kind == "kw") {
            s.branch_keywords.push_back(fields[2]);
        } else if (kind == "op") {
            s.branch_operators.push_back(fields[2]);
        } else {
            fail("unknown entry kind");
        }
    }
    return t;
}

const LanguageSyntax& SyntaxTable::for_language(const std::string& language) const {
    auto it = table_.find(language);
    if (it != table_.end()) return it->second;
    return table_.at("default");
}

bool SyntaxTable::has_language(const std::string& language) const {
    return table_.count(language) > 0;
}

// --- scanner ----------------------------------------------------------------

ScanResult scan_source(std::string_view content, const LanguageSyntax& syntax) {
    ScanResult r;
    r.keyword_view.assign(content.begin(), content.end());
    r.import_view.assign(content.begin(), content.end());

    enum class State { Normal, LineComment, BlockComment, InString };
    State state = State::Normal;
    size_t active = 0;  // index of the active block comment / string delim

    bool line_has_nonws = false;
    bool line_first_nonws_is_comment = false;
    bool line_seen_nonws = false;
    bool overlaps_block = false;

    auto matches = [&](size_t pos, const std::string& pat) {
        return !pat.empty() && content.compare(pos, pat.size(), pat) == 0;
    };
    auto blank_keyword = [&](size_t pos, size_t len) {
        for (size_t i = pos; i < pos + len && i < content.size(); ++i) {
            if (content[i] != '\n') r.keyword_view[i] = ' ';
        }
    };
    auto blank_both = [&](size_t pos, size_t len) {
        for (size_t i = pos; i < pos + len && i < content.size(); ++i) {
            if (content[i] != '\n') {
                r.keyword_view[i] = ' ';
                r.import_view[i] = ' ';
            }
        }
    };

    size_t i = 0;
    const size_t n = content.size();
    auto finish_line = [&]() {
        if (line_has_nonws) {
            ++r.loc;
            if (overlaps_block || line_first_nonws_is_comment) ++r.comment_lines;
        }
        line_has_nonws = false;
        line_first_nonws_is_comment = false;
        line_seen_nonws = false;
        overlaps_block = (state == State::BlockComment);
    };

    while (i < n) {
        const char c = content[i];
        if (c == '\n') {
            if (state == State::LineComment) state = State::Normal;
            if (state == State::InString && !syntax.strings[active].multiline) {
                state = State::Normal;  // unterminated single-line string
            }
            finish_line();
            ++i;
            continue;
        }

        const bool is_ws = (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v');
        if (!is_ws) line_has_nonws = true;

        switch (state) {
            case State::Normal: {
                bool consumed = false;
                for (size_t k = 0; k < syntax.block_comments.size(); ++k) {
                    if (matches(i, syntax.block_comments[k].first)) {
                        state = State::BlockComment;
                        active = k;
                        overlaps_block = true;
                        if (!line_seen_nonws) line_first_nonws_is_comment = true;
                        line_seen_nonws = true;
                        blank_both(i, syntax.block_comments[k].first.size());
                        i += syntax.block_comments[k].first.size();
                        consumed = true;
                        break;
                    }
                }
                if (consumed) break;
                for (const auto& marker : syntax.line_comments) {
                    if (matches(i, marker)) {
                        state = State::LineComment;
                        if (!line_seen_nonws) line_first_nonws_is_comment = true;
                        line_seen_nonws = true;
                        blank_both(i, marker.size());
                        i += marker.size();
                        consumed = true;
                        break;
                    }
                }
                if (consumed) break;
                for (size_t k = 0; k < syntax.strings.size(); ++k) {
                    if (matches(i, syntax.strings[k].open)) {
                        state = State::InString;
                        active = k;
                        if (!is_ws) line_seen_nonws = true;
                        blank_keyword(i, syntax.strings[k].open.size());
                        i += syntax.strings[k].open.size();
                        consumed = true;
                        break;
                    }
                }
                if (consumed) break;
                if (!is_ws) line_seen_nonws = true;
                ++i;
                break;
            }
            case State::LineComment: {
                blank_both(i, 1);
                ++i;
                break;
            }
            case State::BlockComment: {
                if (!is_ws) line_seen_nonws = true;
                const auto& close = syntax.block_comments[active].second;
                if (matches(i, close)) {
                    blank_both(i, close.size());
                    i += close.size();
                    state = State::Normal;
                } else {
                    blank_both(i, 1);
                    ++i;
                }
                break;
            }
            case State::InString: {
                if (!is_ws) line_seen_nonws = true;
                const auto& d = syntax.strings[active];
                if (d.escapes && c == '\\' && i + 1 < n) {
                    blank_keyword(i, 2);
                    i += 2;
                    break;
                }
                if (matches(i, d.close)) {
                    blank_keyword(i, d.close.size());
                    i += d.close.size();
                    state = State::Normal;
                } else {
                    blank_keyword(i, 1);
                    ++i;
                }
                break;
            }
        }
    }
    if (!content.empty() && content.back() != '\n') finish_line();
    return r;
}

// --- complexity ---------------------------------------------------------------

uint64_t complexity(const Document& doc, const SyntaxTable& syntax) {
    const LanguageSyntax& syn = syntax.for_language(doc.language);
    const ScanResult scan = scan_source(doc.content, syn);
    const std::string_view code = scan.keyword_view;

    const std::set<std::string> keywords(syn.branch_keywords.begin(),
                                         syn.branch_keywords.end());
    uint64_t branches = 0;

    auto is_word = [](unsigned char ch) {
        return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
               (ch >= '0' && ch <= '9') || ch == '_';
    };

    size_t i = 0;
    while (i < code.size()) {
        const unsigned char c = static_cast<unsigned char>(code[i]);
        if (is_word(c)) {
            size_t j = i + 1;
            while (j < code.size() && is_word(static_cast<unsigned char>(code[j]))) ++j;
            if (keywords.count(std::string(code.substr(i, j - i)))) ++branches;
            i = j;
        } else {
            bool matched = false;
            for (const auto& op : syn.branch_operators) {
                if (!op.empty() && code.compare(i, op.size(), op) == 0) {
                    ++branches;
                    i += op.size();
                    matched = true;
                    break;
                }
            }
            if (!matched) ++i;
        }
    }
    return 1 + branches;
}

// --- imports -------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string first_segment(std::string_view s, char sep) {
    const size_t pos = s.find(sep);
    return std::string(pos == std::string_view::npos ? s : s.substr(0, pos));
}

std::string first_token(std::string_view s) {
    std::string t = trim(s);
    const size_t sp = t.find_first_of(" \t");
    return sp == std::string::npos ? t : t.substr(0, sp);
}

// Quoted string starting at or after `from`; returns empty when absent.
std::string quoted_after(std::string_view line, size_t from) {
    const size_t q = line.find_first_of("'\"", from);
    if (q == std::string_view::npos) return {};
    const char quote = line[q];
    const size_t end = line.find(quote, q + 1);
    if (end == std::string_view::npos) return {};
    return std::string(line.substr(q + 1, end - q - 1));
}

std::string js_package_root(std::string_view module) {
    if (module.empty() || module[0] == '.' || module[0] == '/') return {};
    if (module[0] == '@') {  // @scope/name
        const size_t s1 = module.find('/');
        if (s1 == std::string_view::npos) return std::string(module);
        const size_t s2 = module.find('/', s1 + 1);
        return std::string(module.substr(0, s2));
    }
    return first_segment(module, '/');
}

std::string java_root(std::string_view path) {
    // First two dot segments: com.google.common -> com.google.
    const size_t d1 = path.find('.');
    if (d1 == std::string_view::npos) return std::string(path);
    const size_t d2 = path.find('.', d1 + 1);
    return std::string(d2 == std::string_view::npos ? path : path.substr(0, d2));
}

std::string include_root(std::string_view header) {
    if (header.find('/') != std::string_view::npos) return first_segment(header, '/');
    const size_t dot = header.rfind('.');
    return std::string(dot == std::string_view::npos ? header : header.substr(0, dot));
}

// Roots of imported modules, one entry per import statement.
std::vector<std::string> extract_import_roots(std::string_view code,
                                              const std::string& language) {
    std::vector<std::string> roots;
    const auto lines = split_lines(code);
    bool in_go_import_block = false;

    for (std::string_view raw : lines) {
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (language == "python") {
            if (line.rfind("import ", 0) == 0) {
                // import a.b as x, c.d
                std::string rest = line.substr(7);
                size_t start = 0;
                while (start <= rest.size()) {
                    size_t comma = rest.find(',', start);
                    std::string piece = first_token(
                        rest.substr(start, comma == std::string::npos ? std::string::npos
                                                                      : comma - start));
                    if (!piece.empty()) roots.push_back(first_segment(piece, '.'));
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
            } else if (line.rfind("from ", 0) == 0) {
                const std::string mod = first_token(line.substr(5));
                if (!mod.empty() && mod[0] != '.') roots.push_back(first_segment(mod, '.'));
            }
        } else if (language == "c" || language == "cpp") {
            if (!line.empty() && line[0] == '#') {
                std::string rest = trim(line.substr(1));
                if (rest.rfind("include", 0) == 0) {
                    rest = trim(rest.substr(7));
                    if (!rest.empty() && (rest[0] == '<' || rest[0] == '"')) {
                        const char closer = rest[0] == '<' ? '>' : '"';
                        const size_t end = rest.find(closer, 1);
                        if (end != std::string::npos) {
                            roots.push_back(include_root(rest.substr(1, end - 1)));
                        }
                    }
                }
            }
        } else if (language == "java" || language == "groovy" || language == "scala" ||
                   language == "kotlin") {
            if (line.rfind("import ", 0) == 0) {
                std::string rest = trim(line.substr(7));
                if (rest.rfind("static ", 0) == 0) rest = trim(rest.substr(7));
                std::string path = first_token(rest);
                while (!path.empty() && (path.back() == ';' || path.back() == '*')) {
                    path.pop_back();
                }
                if (!path.empty() && path.back() == '.') path.pop_back();
                if (!path.empty()) roots.push_back(java_root(path));
            }
        } else if (language == "javascript" || language == "typescript") {
            if (line.rfind("import ", 0) == 0 || line.rfind("import(", 0) == 0 ||
                line.rfind("export ", 0) == 0) {
                const size_t from = line.find("from");
                std::string mod = quoted_after(line, from == std::string::npos ? 6 : from);
                const std::string root = js_package_root(mod);
                if (!root.empty()) roots.push_back(root);
            }
            size_t pos = 0;
            while ((pos = line.find("require(", pos)) != std::string::npos) {
                const std::string root = js_package_root(quoted_after(line, pos));
                if (!root.empty()) roots.push_back(root);
                pos += 8;
            }
        } else if (language == "go") {
            if (line.rfind("import (", 0) == 0) {
                in_go_import_block = true;
                continue;
            }
            if (in_go_import_block) {
                if (line == ")") {
                    in_go_import_block = false;
                    continue;
                }
                const std::string mod = quoted_after(line, 0);
                // Package name is the final path segment.
                if (!mod.empty()) {
                    const size_t slash = mod.rfind('/');
                    roots.push_back(slash == std::string::npos ? mod : mod.substr(slash + 1));
                }
            } else if (line.rfind("import ", 0) == 0) {
                const std::string mod = quoted_after(line, 0);
                if (!mod.empty()) {
                    const size_t slash = mod.rfind('/');
                    roots.push_back(slash == std::string::npos ? mod : mod.substr(slash + 1));
                }
            }
        } else if (language == "rust") {
            if (line.rfind("use ", 0) == 0) {
                std::string path = first_token(line.substr(4));
                const std::string root = first_segment(path, ':');
                if (root != "crate" && root != "self" && root != "super") {
                    roots.push_back(root);
                }
            } else if (line.rfind("extern crate ", 0) == 0) {
                std::string name = first_token(line.substr(13));
                if (!name.empty() && name.back() == ';') name.pop_back();
                roots.push_back(name);
            }
        } else if (language == "ruby") {
            if (line.rfind("require ", 0) == 0 || line.rfind("require(", 0) == 0 ||
                line.rfind("gem ", 0) == 0) {
                const std::string mod = quoted_after(line, 0);
                if (!mod.empty()) roots.push_back(first_segment(mod, '/'));
            }
        } else if (language == "php") {
            if (line.rfind("use ", 0) == 0) {
                std::string path = first_token(line.substr(4));
                if (!path.empty() && path.back() == ';') path.pop_back();
                roots.push_back(first_segment(path, '\\'));
            }
        } else if (language == "c-sharp") {
            if (line.rfind("using ", 0) == 0 && line.find('=') == std::string::npos &&
                line.find('(') == std::string::npos) {
                std::string path = first_token(line.substr(6));
                if (!path.empty() && path.back() == ';') path.pop_back();
                if (!path.empty()) roots.push_back(first_segment(path, '.'));
            }
        }
    }
    return roots;
}

}  // namespace

ImportScan third_party_imports(const Document& doc, const ImportRegistry& registry,
                               const SyntaxTable& syntax) {
    const LanguageSyntax& syn = syntax.for_language(doc.language);
    const ScanResult scan = scan_source(doc.content, syn);
    const auto roots = extract_import_roots(scan.import_view, doc.language);

    ImportScan result;
    std::set<std::string> matched;
    for (const auto& root : roots) {
        if (registry.contains(doc.language, root)) {
            ++result.count;
            matched.insert(root);
        }
    }
    result.names.assign(matched.begin(), matched.end());
    return result;
}

// --- standards ------------------------------------------------------------------

uint64_t standards_check(const Document& doc, uint64_t max_line_len) {
    uint64_t violations = 0;
    bool tab_indent = false;
    bool space_indent = false;
    for (std::string_view line : split_lines(doc.content)) {
        if (!line.empty()) {
            const char last = line.back();
            if (last == ' ' || last == '\t' || (last == '\r' && line.size() > 1 &&
                                                (line[line.size() - 2] == ' ' ||
                                                 line[line.size() - 2] == '\t'))) {
                ++violations;
            }
            if (line[0] == '\t') tab_indent = true;
            if (line[0] == ' ') space_indent = true;
        }
        if (utf8_length(line) > max_line_len) ++violations;
    }
    if (tab_indent && space_indent) ++violations;
    return violations;
}

// --- registry --------------------------------------------------------------------

ImportRegistry ImportRegistry::defaults() {
    ImportRegistry r;
    auto add = [&r](const std::string& lang, std::initializer_list<const char*> names) {
        auto& s = r.by_lang_[lang];
        for (const char* n : names) s.insert(n);
    };

    add("python", {"numpy",      "pandas",   "scipy",     "requests",   "torch",
                   "tensorflow", "sklearn",  "matplotlib", "django",    "flask",
                   "sqlalchemy", "pytest",   "click",     "boto3",      "PIL",
                   "cv2",        "seaborn",  "keras",     "transformers", "fastapi",
                   "pydantic",   "celery",   "redis",     "pymongo",    "psycopg2",
                   "jinja2",     "yaml",     "bs4",       "selenium",   "scrapy",
                   "nltk",       "spacy",    "gensim",    "xgboost",    "lightgbm",
                   "plotly",     "bokeh",    "dash",      "tornado",    "aiohttp",
                   "httpx",      "attrs",    "marshmallow", "alembic",  "gunicorn",
                   "uvicorn",    "pika",     "kafka",     "grpc",       "absl"});

    add("javascript", {"react",    "lodash",    "express",  "axios",     "vue",
                       "jquery",   "webpack",   "moment",   "chalk",     "commander",
                       "underscore", "async",   "bluebird", "redux",     "rxjs",
                       "d3",       "three",     "socket.io", "mongoose", "sequelize",
                       "koa",      "fastify",   "next",     "nuxt",      "angular",
                       "svelte",   "ember",     "backbone", "handlebars", "pug",
                       "sass",     "less",      "babel",    "eslint",    "prettier",
                       "jest",     "mocha",     "chai",     "sinon",     "cypress",
                       "puppeteer", "cheerio",  "request",  "got",       "node-fetch",
                       "dotenv",   "uuid",      "winston",  "morgan",    "passport"});
    add("typescript", {"react",   "lodash",  "express", "axios",   "vue",
                       "rxjs",    "redux",   "next",    "angular", "svelte",
                       "jest",    "zod",     "d3",      "three",   "dotenv",
                       "uuid",    "winston", "chalk",   "commander", "typeorm",
                       "prisma",  "nestjs",  "fastify", "koa",     "mongoose"});

    add("java", {"com.google",     "org.apache",  "org.springframework", "org.junit",
                 "io.netty",       "com.fasterxml", "org.slf4j",         "org.hibernate",
                 "org.mockito",    "com.squareup", "io.reactivex",       "org.jetbrains",
                 "org.eclipse",    "com.amazonaws", "org.json",          "com.alibaba",
                 "io.grpc",        "org.yaml",    "redis.clients",       "org.elasticsearch",
                 "com.zaxxer",     "org.projectlombok", "javax.inject",  "org.joda",
                 "org.assertj",    "org.testng",  "com.mysql",           "org.postgresql",
                 "io.swagger",     "org.seleniumhq", "org.quartz",       "org.flywaydb",
                 "com.h2database", "ch.qos",      "org.logback",         "com.codahale",
                 "io.dropwizard",  "org.kafka",   "org.zookeeper",       "com.netflix"});

    add("cpp", {"boost",   "eigen3",  "Eigen",    "fmt",      "spdlog",
                "gtest",   "gmock",   "opencv2",  "absl",     "tbb",
                "grpc",    "protobuf", "google",  "nlohmann", "rapidjson",
                "catch2",  "doctest", "benchmark", "folly",   "poco",
                "QtCore",  "QtWidgets", "SDL2",   "GLFW",     "glm",
                "cereal",  "range",   "ctre",     "zmq",      "curl"});
    add("c", {"curl",   "openssl", "zlib",    "sqlite3", "png",
              "jpeg",   "ssl",     "crypto",  "pcre",    "glib",
              "gtk",    "SDL2",    "libxml",  "json-c",  "uv",
              "event",  "pthread", "m",       "readline", "ncurses"});

    add("go", {"testify", "gin",    "gorm",     "cobra",  "zap",
               "grpc",    "protobuf", "errors", "logrus", "viper",
               "mux",     "echo",   "fiber",    "redis",  "mongo-driver",
               "aws-sdk-go", "kubernetes", "prometheus", "uuid", "yaml.v2",
               "yaml.v3", "websocket", "jwt-go", "sqlx",  "pq"});

    add("rust", {"serde",     "tokio",   "rand",      "clap",   "regex",
                 "anyhow",    "thiserror", "itertools", "rayon", "log",
                 "env_logger", "futures", "reqwest",   "hyper",  "actix",
                 "diesel",    "sqlx",    "chrono",     "uuid",   "lazy_static",
                 "once_cell", "crossbeam", "parking_lot", "num", "nalgebra",
                 "ndarray",   "criterion", "proptest", "tracing", "axum"});

    add("ruby", {"rails",    "sinatra", "rspec",   "nokogiri", "puma",
                 "rake",     "devise",  "sidekiq", "pry",      "rubocop",
                 "faraday",  "httparty", "redis",  "pg",       "mysql2",
                 "capybara", "factory_bot", "faker", "json",   "activerecord"});

    add("php", {"Symfony",  "Laravel", "Monolog",  "Guzzle",   "PHPUnit",
                "Twig",     "Doctrine", "Carbon",  "Illuminate", "Psr",
                "GuzzleHttp", "Faker", "Ramsey",   "League",   "Slim"});

    add("c-sharp", {"Newtonsoft", "NUnit",   "Xunit",      "Moq",       "Serilog",
                    "AutoMapper", "Dapper",  "EntityFramework", "NLog", "RestSharp",
                    "FluentAssertions", "MediatR", "Polly", "Hangfire", "StackExchange"});
    return r;
}

ImportRegistry ImportRegistry::load(const std::filesystem::path& file) {
    ImportRegistry r;
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open import registry: " + file.string());
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ConfigError("import registry " + file.string() + ":" +
                              std::to_string(lineno) + ": expected lang<TAB>name");
        }
        r.by_lang_[line.substr(0, tab)].insert(line.substr(tab + 1));
    }
    return r;
}

bool ImportRegistry::contains(const std::string& language, const std::string& name) const {
    auto it = by_lang_.find(language);
    return it != by_lang_.end() && it->second.count(name) > 0;
}

size_t ImportRegistry::size() const {
    size_t n = 0;
    for (const auto& [_, names] : by_lang_) n += names.size();
    return n;
}

// --- metrics and scoring ----------------------------------------------------------

QualityMetrics compute_metrics(const Document& doc, const SyntaxTable& syntax,
                               const ImportRegistry& registry, uint64_t max_line_len) {
    QualityMetrics m;
    m.comment_syntax_known = syntax.has_language(doc.language);

    const LanguageSyntax& syn = syntax.for_language(doc.language);
    const ScanResult scan = scan_source(doc.content, syn);
    m.loc = scan.loc;
    m.comment_ratio = scan.loc > 0 ? static_cast<double>(scan.comment_lines) /
                                         static_cast<double>(scan.loc)
                                   : 0.0;

    const auto lines = split_lines(doc.content);
    if (!lines.empty()) {
        uint64_t chars = 0;
        for (std::string_view line : lines) chars += utf8_length(line);
        m.mean_chars_per_line = static_cast<double>(chars) / static_cast<double>(lines.size());
    }

    m.complexity = complexity(doc, syntax);
    m.known_import_count = third_party_imports(doc, registry, syntax).count;
    m.standards_violations = standards_check(doc, max_line_len);
    return m;
}

double Trapezoid::operator()(double x) const {
    if (x >= one_lo && x <= one_hi) return 1.0;
    if (x <= zero_lo || x >= zero_hi) return 0.0;
    if (x < one_lo) return (x - zero_lo) / (one_lo - zero_lo);
    return (zero_hi - x) / (zero_hi - one_hi);
}

void RuleConfig::validate() const {
    const double sum = w_comments + w_complexity + w_line_shape + w_imports + w_standards;
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ConfigError("rule weights must sum to 1 (got " + std::to_string(sum) + ")");
    }
    if (keep_threshold < 0.0 || keep_threshold > 1.0) {
        throw ConfigError("rule keep_threshold must be in [0,1]");
    }
}

RuleScore rule_score(const QualityMetrics& m, const RuleConfig& config) {
    config.validate();
    RuleScore s;
    s.components["comments"] = config.comment_ratio(m.comment_ratio);
    s.components["complexity"] = config.complexity(static_cast<double>(m.complexity));
    s.components["line_shape"] = config.mean_line(m.mean_chars_per_line);
    s.components["imports"] =
        std::min(static_cast<double>(m.known_import_count), config.import_cap) /
        config.import_cap;
    const double density = m.loc > 0 ? static_cast<double>(m.standards_violations) /
                                           static_cast<double>(m.loc)
                                     : (m.standards_violations > 0 ? 1.0 : 0.0);
    s.components["standards"] =
        std::clamp(1.0 - config.standards_slope * density, 0.0, 1.0);

    s.value = config.w_comments * s.components["comments"] +
              config.w_complexity * s.components["complexity"] +
              config.w_line_shape * s.components["line_shape"] +
              config.w_imports * s.components["imports"] +
              config.w_standards * s.components["standards"];
    return s;
}

}  // namespace curator
