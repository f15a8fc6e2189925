#include "synthbench/demographics.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <sstream>

#include "synthbench/error.hpp"

namespace synthbench {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string strip(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(s);
    while (std::getline(in, field, sep)) out.push_back(field);
    return out;
}

}  // namespace

Gender parse_gender(std::string_view s) {
    const std::string t = lower(strip(s));
    if (t == "f" || t == "female") return Gender::Female;
    if (t == "m" || t == "male") return Gender::Male;
    return Gender::Other;
}

Demographics Demographics::read_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError("missing demographics header", 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split(line, ',');
    auto col = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw ConfigError("demographics CSV missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t id_idx = col("patient_id");
    const std::size_t age_idx = col("age");
    const std::size_t gender_idx = col("gender");
    const std::size_t eth_idx = col("ethnicity");

    Demographics demo;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split(line, ',');
        if (fields.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " columns, got " +
                                 std::to_string(fields.size()),
                             lineno);
        }
        PersonInfo info;
        try {
            info.age = std::stoi(fields[age_idx]);
        } catch (const std::exception&) {
            throw ParseError("invalid age '" + fields[age_idx] + "'", lineno);
        }
        if (info.age < 0) throw ParseError("negative age", lineno);
        info.gender = parse_gender(fields[gender_idx]);
        info.ethnicity = strip(fields[eth_idx]);
        if (fields[id_idx].empty()) throw ParseError("empty patient id", lineno);
        demo.add(fields[id_idx], std::move(info));
    }
    return demo;
}

CohortPredicate CohortPredicate::all() {
    CohortPredicate p;
    p.text_ = "true";
    return p;
}

CohortPredicate CohortPredicate::parse(std::string_view expr) {
    CohortPredicate pred;
    pred.text_ = strip(expr);
    if (pred.text_.empty() || lower(pred.text_) == "true") {
        pred.text_ = "true";
        return pred;
    }

    // Split on '&' (also accepts the word 'and').
    std::string normalized = pred.text_;
    for (const char* word : {" and ", " AND ", " And "}) {
        std::size_t pos;
        while ((pos = normalized.find(word)) != std::string::npos) {
            normalized.replace(pos, std::string(word).size(), " & ");
        }
    }

    for (const std::string& raw : split(normalized, '&')) {
        const std::string clause_text = strip(raw);
        if (clause_text.empty()) throw ConfigError("empty clause in predicate: '" + std::string(expr) + "'");

        static const std::vector<std::pair<std::string, Op>> ops = {
            {"==", Op::Eq}, {"!=", Op::Ne}, {">=", Op::Ge}, {"<=", Op::Le}, {">", Op::Gt}, {"<", Op::Lt}};
        std::size_t op_pos = std::string::npos;
        std::size_t op_len = 0;
        Op op = Op::Eq;
        for (const auto& [tok, o] : ops) {
            const std::size_t pos = clause_text.find(tok);
            if (pos != std::string::npos && (op_pos == std::string::npos || pos < op_pos ||
                                             (pos == op_pos && tok.size() > op_len))) {
                op_pos = pos;
                op_len = tok.size();
                op = o;
            }
        }
        if (op_pos == std::string::npos) {
            throw ConfigError("no comparison operator in clause '" + clause_text + "'");
        }

        const std::string field_name = lower(strip(clause_text.substr(0, op_pos)));
        const std::string value = strip(clause_text.substr(op_pos + op_len));
        if (value.empty()) throw ConfigError("missing value in clause '" + clause_text + "'");

        Clause clause;
        clause.op = op;
        if (field_name == "age") {
            clause.field = Field::Age;
            try {
                clause.age_value = std::stoi(value);
            } catch (const std::exception&) {
                throw ConfigError("age comparison needs an integer, got '" + value + "'");
            }
        } else if (field_name == "gender") {
            clause.field = Field::Gender;
            clause.gender_value = parse_gender(value);
        } else if (field_name == "ethnicity") {
            clause.field = Field::Ethnicity;
            clause.string_value = lower(value);
        } else {
            throw ConfigError("unknown predicate field '" + field_name + "' (expected age/gender/ethnicity)");
        }
        if (clause.field != Field::Age && op != Op::Eq && op != Op::Ne) {
            throw ConfigError("ordering comparison only supported for age: '" + clause_text + "'");
        }
        pred.clauses_.push_back(std::move(clause));
    }
    return pred;
}

bool CohortPredicate::operator()(const PersonInfo& p) const {
    for (const Clause& c : clauses_) {
        bool ok = false;
        switch (c.field) {
            case Field::Age: {
                switch (c.op) {
                    case Op::Eq: ok = p.age == c.age_value; break;
                    case Op::Ne: ok = p.age != c.age_value; break;
                    case Op::Gt: ok = p.age > c.age_value; break;
                    case Op::Ge: ok = p.age >= c.age_value; break;
                    case Op::Lt: ok = p.age < c.age_value; break;
                    case Op::Le: ok = p.age <= c.age_value; break;
                }
                break;
            }
            case Field::Gender: {
                const bool eq = p.gender == c.gender_value;
                ok = (c.op == Op::Eq) ? eq : !eq;
                break;
            }
            case Field::Ethnicity: {
                const bool eq = lower(p.ethnicity) == c.string_value;
                ok = (c.op == Op::Eq) ? eq : !eq;
                break;
            }
        }
        if (!ok) return false;
    }
    return true;
}

PhenotypeMatrix filter_cohort(const PhenotypeMatrix& matrix, const Demographics& demo,
                              const CohortPredicate& predicate) {
    if (matrix.n_rows() > 0 && matrix.patient_ids().empty()) {
        throw DataError("cohort filtering requires patient ids on the matrix");
    }
    std::vector<std::string> missing;
    for (const std::string& pid : matrix.patient_ids()) {
        if (demo.find(pid) == nullptr) missing.push_back(pid);
    }
    if (!missing.empty()) {
        std::string msg = "patients missing from demographics:";
        for (std::size_t i = 0; i < missing.size() && i < 20; ++i) msg += " " + missing[i];
        if (missing.size() > 20) msg += " ... (" + std::to_string(missing.size()) + " total)";
        throw DataError(msg);
    }

    std::vector<PhenotypeMatrix::Row> rows;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
        const std::string& pid = matrix.patient_ids()[i];
        if (predicate(*demo.find(pid))) {
            rows.push_back(matrix.row(i));
            ids.push_back(pid);
        }
    }
    return PhenotypeMatrix(matrix.vocab(), std::move(rows), std::move(ids));
}

}  // namespace synthbench
