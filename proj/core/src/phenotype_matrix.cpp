#include "synthbench/phenotype_matrix.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "synthbench/error.hpp"

namespace synthbench {

namespace {

bool has_whitespace(const std::string& s) {
    return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

PhenotypeMatrix::PhenotypeMatrix(Vocabulary vocab, std::vector<Row> rows, std::vector<std::string> patient_ids)
    : vocab_(std::move(vocab)), rows_(std::move(rows)), patient_ids_(std::move(patient_ids)) {
    if (!patient_ids_.empty() && patient_ids_.size() != rows_.size()) {
        throw DataError("patient id list length does not match row count");
    }
    const std::uint32_t k = static_cast<std::uint32_t>(vocab_.size());
    for (Row& r : rows_) {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        if (!r.empty() && r.back() >= k) {
            throw DataError("row index " + std::to_string(r.back()) + " out of range for K=" + std::to_string(k));
        }
    }
}

bool PhenotypeMatrix::cell(std::size_t i, std::uint32_t k) const {
    const Row& r = rows_.at(i);
    return std::binary_search(r.begin(), r.end(), k);
}

std::vector<std::uint64_t> PhenotypeMatrix::column_counts() const {
    std::vector<std::uint64_t> counts(n_cols(), 0);
    for (const Row& r : rows_) {
        for (std::uint32_t k : r) ++counts[k];
    }
    return counts;
}

void PhenotypeMatrix::write_sparse(std::ostream& out) const {
    out << "K " << n_cols() << '\n';
    out << "vocab";
    for (const std::string& c : vocab_.codes()) {
        if (has_whitespace(c)) throw DataError("code contains whitespace, not serializable: '" + c + "'");
        out << ' ' << c;
    }
    out << '\n';
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        std::string id = patient_ids_.empty() ? "r" + std::to_string(i) : patient_ids_[i];
        if (id.empty() || has_whitespace(id)) {
            throw DataError("patient id empty or contains whitespace, not serializable: '" + id + "'");
        }
        out << id;
        for (std::uint32_t k : rows_[i]) out << ' ' << k;
        out << '\n';
    }
}

PhenotypeMatrix PhenotypeMatrix::read_sparse(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw ParseError("missing header line 'K <int>'", 1);
    ++lineno;
    std::istringstream header(line);
    std::string tag;
    long long k_signed = -1;
    if (!(header >> tag >> k_signed) || tag != "K" || k_signed < 0) {
        throw ParseError("expected header 'K <int>'", lineno);
    }
    const std::size_t k = static_cast<std::size_t>(k_signed);

    if (!std::getline(in, line)) throw ParseError("missing vocab line", lineno + 1);
    ++lineno;
    std::istringstream vocab_line(line);
    if (!(vocab_line >> tag) || tag != "vocab") throw ParseError("expected 'vocab <codes>'", lineno);
    std::vector<std::string> codes;
    codes.reserve(k);
    std::string code;
    while (vocab_line >> code) codes.push_back(std::move(code));
    if (codes.size() != k) {
        throw ParseError("vocab lists " + std::to_string(codes.size()) + " codes, header says K=" + std::to_string(k),
                         lineno);
    }

    std::vector<Row> rows;
    std::vector<std::string> ids;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row_line(line);
        std::string id;
        row_line >> id;
        Row row;
        long long idx;
        while (row_line >> idx) {
            if (idx < 0 || static_cast<std::size_t>(idx) >= k) {
                throw ParseError("column index " + std::to_string(idx) + " out of range", lineno);
            }
            row.push_back(static_cast<std::uint32_t>(idx));
        }
        if (!row_line.eof()) throw ParseError("malformed column index", lineno);
        ids.push_back(std::move(id));
        rows.push_back(std::move(row));
    }
    return PhenotypeMatrix(Vocabulary(std::move(codes)), std::move(rows), std::move(ids));
}

void PhenotypeMatrix::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    write_sparse(out);
    if (!out) throw DataError("write failed: " + path.string());
}

PhenotypeMatrix PhenotypeMatrix::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open matrix file: " + path.string());
    return read_sparse(in);
}

void PhenotypeMatrix::write_dense_csv(std::ostream& out) const {
    out << "patient_id";
    for (const std::string& c : vocab_.codes()) out << ',' << c;
    out << '\n';
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        out << (patient_ids_.empty() ? "r" + std::to_string(i) : patient_ids_[i]);
        const Row& r = rows_[i];
        std::size_t pos = 0;
        for (std::uint32_t k = 0; k < n_cols(); ++k) {
            const bool one = pos < r.size() && r[pos] == k;
            if (one) ++pos;
            out << ',' << (one ? '1' : '0');
        }
        out << '\n';
    }
}

std::vector<double> prevalence(const PhenotypeMatrix& m) {
    if (m.n_rows() == 0) throw DataError("prevalence undefined for an empty matrix (N=0)");
    std::vector<std::uint64_t> counts = m.column_counts();
    std::vector<double> p(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) {
        p[k] = static_cast<double>(counts[k]) / static_cast<double>(m.n_rows());
    }
    return p;
}

namespace {

PhenotypeMatrix project_columns(const PhenotypeMatrix& m, const Vocabulary& target) {
    // old column index -> new, or K for dropped
    const std::uint32_t dropped = static_cast<std::uint32_t>(target.size());
    std::vector<std::uint32_t> remap(m.n_cols(), dropped);
    for (std::uint32_t old = 0; old < m.n_cols(); ++old) {
        if (auto idx = target.index_of(m.vocab().code(old))) remap[old] = *idx;
    }
    std::vector<PhenotypeMatrix::Row> rows;
    rows.reserve(m.n_rows());
    for (const auto& r : m.rows()) {
        PhenotypeMatrix::Row out;
        for (std::uint32_t old : r) {
            if (remap[old] != dropped) out.push_back(remap[old]);
        }
        rows.push_back(std::move(out));
    }
    return PhenotypeMatrix(target, std::move(rows), m.patient_ids());
}

}  // namespace

VocabularyAlignment align_to_intersection(const PhenotypeMatrix& real, const PhenotypeMatrix& syn) {
    if (real.vocab() == syn.vocab()) return {real, syn, {}, {}};

    std::vector<std::string> shared;
    std::vector<std::string> dropped_real;
    for (const std::string& c : real.vocab().codes()) {
        (syn.vocab().contains(c) ? shared : dropped_real).push_back(c);
    }
    std::vector<std::string> dropped_syn;
    for (const std::string& c : syn.vocab().codes()) {
        if (!real.vocab().contains(c)) dropped_syn.push_back(c);
    }
    std::sort(shared.begin(), shared.end());
    std::sort(dropped_real.begin(), dropped_real.end());
    std::sort(dropped_syn.begin(), dropped_syn.end());
    if (shared.empty()) throw DataError("real and synthetic vocabularies have no codes in common");

    Vocabulary target(shared);
    return {project_columns(real, target), project_columns(syn, target), std::move(dropped_real),
            std::move(dropped_syn)};
}

}  // namespace synthbench
