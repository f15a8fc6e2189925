#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "synthbench/phenotype_matrix.hpp"

namespace synthbench {

enum class Gender { Female, Male, Other };

Gender parse_gender(std::string_view s);

struct PersonInfo {
    int age = 0;
    Gender gender = Gender::Other;
    std::string ethnicity;
};

// Per-patient demographics, aligned to a PhenotypeMatrix by patient id.
class Demographics {
public:
    // CSV with columns patient_id, age, gender, ethnicity (any order).
    static Demographics read_csv(std::istream& in);

    void add(const std::string& patient_id, PersonInfo info) { by_id_[patient_id] = std::move(info); }
    const PersonInfo* find(const std::string& patient_id) const {
        auto it = by_id_.find(patient_id);
        return it == by_id_.end() ? nullptr : &it->second;
    }
    std::size_t size() const { return by_id_.size(); }

private:
    std::unordered_map<std::string, PersonInfo> by_id_;
};

// Conjunctive filter expression over age/gender/ethnicity, e.g.
//   "age>50", "gender==Female & ethnicity!=White".
// Operators: == != for all fields, plus > >= < <= for age. Clauses are joined
// with '&' (or 'and'). String comparisons are case-insensitive.
class CohortPredicate {
public:
    static CohortPredicate parse(std::string_view expr);  // ConfigError on bad syntax
    static CohortPredicate all();                         // matches everyone

    bool operator()(const PersonInfo& p) const;
    const std::string& text() const { return text_; }

private:
    enum class Field { Age, Gender, Ethnicity };
    enum class Op { Eq, Ne, Gt, Ge, Lt, Le };
    struct Clause {
        Field field;
        Op op;
        int age_value = 0;
        Gender gender_value = Gender::Other;
        std::string string_value;
    };
    std::vector<Clause> clauses_;
    std::string text_;
};

// Rows restricted to predicate-satisfying patients, order preserved,
// vocabulary unchanged. Every matrix patient must be present in demo.
PhenotypeMatrix filter_cohort(const PhenotypeMatrix& matrix, const Demographics& demo,
                              const CohortPredicate& predicate);

}  // namespace synthbench
