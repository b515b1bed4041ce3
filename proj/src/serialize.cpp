#include "bogo/serialize.hpp"

#include <fstream>
#include <sstream>

#include "bogo/errors.hpp"

namespace bogo {

using nlohmann::json;

namespace {

json vector_json(const VectorXd& v)
{
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json matrix_json(const MatrixXd& m)
{
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string join(const std::string& where, const std::string& key)
{
    return where.empty() ? key : where + "." + key;
}

const json& field(const json& j, const std::string& key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        throw UsageError(join(where, key), "missing field");
    return j.at(key);
}

double get_number(const json& j, const std::string& key, const std::string& where)
{
    const json& v = field(j, key, where);
    if (!v.is_number()) throw UsageError(join(where, key), "expected a number");
    return v.get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& where)
{
    const json& v = field(j, key, where);
    if (!v.is_number_integer()) throw UsageError(join(where, key), "expected an integer");
    return v.get<int>();
}

VectorXd get_vector(const json& j, const std::string& key, const std::string& where)
{
    const json& v = field(j, key, where);
    if (!v.is_array()) throw UsageError(join(where, key), "expected an array of numbers");
    VectorXd out(static_cast<Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
            throw UsageError(join(where, key) + "[" + std::to_string(i) + "]", "expected a number");
        out[static_cast<Index>(i)] = v[i].get<double>();
    }
    return out;
}

MatrixXd get_matrix(const json& v, const std::string& path)
{
    if (!v.is_array()) throw UsageError(path, "expected an array of rows");
    if (v.empty()) return MatrixXd(0, 0);
    if (!v[0].is_array()) throw UsageError(path, "expected an array of rows");
    const Index rows = static_cast<Index>(v.size()), cols = static_cast<Index>(v[0].size());
    MatrixXd m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const json& r = v[static_cast<std::size_t>(i)];
        if (!r.is_array() || static_cast<Index>(r.size()) != cols)
            throw UsageError(path + "[" + std::to_string(i) + "]", "ragged matrix row");
        for (Index k = 0; k < cols; ++k) {
            if (!r[static_cast<std::size_t>(k)].is_number())
                throw UsageError(path, "expected numbers");
            m(i, k) = r[static_cast<std::size_t>(k)].get<double>();
        }
    }
    return m;
}

// A scalar is accepted for 1x1 matrices.
MatrixXd get_metric(const json& j, const std::string& key, const std::string& where)
{
    const json& v = field(j, key, where);
    if (v.is_number()) return MatrixXd::Constant(1, 1, v.get<double>());
    return get_matrix(v, join(where, key));
}

}  // namespace

json to_json(const GeometryPair& g)
{
    return json{{"n", g.n},
                {"g_plus", matrix_json(g.g_plus)},
                {"g_minus", matrix_json(g.g_minus)},
                {"vielbein_plus", matrix_json(g.vielbein_plus)},
                {"vielbein_minus", matrix_json(g.vielbein_minus)},
                {"volume", g.volume},
                {"fiber_dim", g.fiber_dim}};
}

GeometryPair geometry_from_json(const json& j, const std::string& where)
{
    const MatrixXd gp = get_metric(j, "g_plus", where);
    const MatrixXd gm = get_metric(j, "g_minus", where);
    const double volume = get_number(j, "volume", where);
    const int fiber = j.contains("fiber_dim") ? get_int(j, "fiber_dim", where) : 1;
    GeometryPair g;
    try {
        g = make_geometry(gp, gm, volume, fiber);
    } catch (const DomainError& e) {
        throw UsageError(where, e.what());
    }
    if (j.contains("vielbein_plus")) g.vielbein_plus = get_metric(j, "vielbein_plus", where);
    if (j.contains("vielbein_minus")) g.vielbein_minus = get_metric(j, "vielbein_minus", where);
    if (j.contains("n") && get_int(j, "n", where) != g.n)
        throw UsageError(where + ".n", "does not match the metric size");
    return g;
}

json to_json(const ModeFamily& f)
{
    return json{{"kind", f.kind == ModeFamily::Kind::torus ? "torus" : "dirac"},
                {"a", f.a},
                {"b", f.b},
                {"q_plus", f.q_plus},
                {"q_minus", f.q_minus},
                {"antiperiodic", f.antiperiodic},
                {"cutoff", f.cutoff}};
}

ModeFamily family_from_json(const json& j, const std::string& where)
{
    ModeFamily f;
    const json& kind = field(j, "kind", where);
    if (kind == "torus")
        f.kind = ModeFamily::Kind::torus;
    else if (kind == "dirac")
        f.kind = ModeFamily::Kind::dirac;
    else
        throw UsageError(where + ".kind", "expected \"torus\" or \"dirac\"");
    f.a = get_number(j, "a", where);
    f.b = get_number(j, "b", where);
    f.q_plus = get_number(j, "q_plus", where);
    f.q_minus = get_number(j, "q_minus", where);
    const json& ap = field(j, "antiperiodic", where);
    if (!ap.is_boolean()) throw UsageError(where + ".antiperiodic", "expected true or false");
    f.antiperiodic = ap.get<bool>();
    f.cutoff = get_int(j, "cutoff", where);
    return f;
}

json to_json(const OperatorPair& pair)
{
    json doc;
    doc["format"] = pair_format;
    doc["version"] = pair_format_version;
    doc["kind"] = pair.is_dirac() ? "dirac" : "laplace";
    doc["n"] = pair.plus.n;
    doc["fiber_dim"] = pair.plus.fiber_dim;
    doc["m"] = pair.m;
    doc["values_plus"] = vector_json(pair.plus.values);
    doc["values_minus"] = vector_json(pair.minus.values);

    const auto& O = pair.overlap.entries;
    json overlap;
    if (pair.overlap.is_identity) {
        overlap["identity"] = true;
    } else if (4 * O.nonZeros() < O.rows() * O.cols()) {
        json entries = json::array();
        for (Index j = 0; j < O.outerSize(); ++j)
            for (SparseRowMatrix::InnerIterator it(O, j); it; ++it)
                entries.push_back(json::array({it.row(), it.col(), it.value()}));
        overlap["sparse"] = {{"rows", O.rows()}, {"cols", O.cols()}, {"entries", entries}};
    } else {
        overlap["dense"] = matrix_json(MatrixXd(O));
    }
    doc["overlap"] = overlap;

    json meta;
    meta["label_plus"] = pair.plus.label;
    meta["label_minus"] = pair.minus.label;
    if (pair.geometry) meta["geometry"] = to_json(*pair.geometry);
    if (pair.family) meta["family"] = to_json(*pair.family);
    doc["meta"] = meta;
    return doc;
}

OperatorPair pair_from_json(const json& doc)
{
    if (!doc.is_object()) throw UsageError("", "pair document must be a JSON object");
    if (field(doc, "format", "") != pair_format)
        throw UsageError("format", std::string("expected \"") + pair_format + "\"");
    if (get_int(doc, "version", "") != pair_format_version)
        throw UsageError("version", "unsupported version");
    const json& kind = field(doc, "kind", "");
    Spectrum plus, minus;
    if (kind == "dirac")
        plus.kind = minus.kind = SpectrumKind::dirac;
    else if (kind != "laplace")
        throw UsageError("kind", "expected \"laplace\" or \"dirac\"");
    plus.n = minus.n = get_int(doc, "n", "");
    plus.fiber_dim = minus.fiber_dim = get_int(doc, "fiber_dim", "");
    const double m = get_number(doc, "m", "");
    if (!(m > 0)) throw UsageError("m", "must be positive");
    plus.values = get_vector(doc, "values_plus", "");
    minus.values = get_vector(doc, "values_minus", "");

    const json& ov = field(doc, "overlap", "");
    OverlapMatrix overlap;
    if (ov.contains("identity")) {
        if (plus.size() != minus.size())
            throw UsageError("overlap.identity", "identity overlap needs equal spectrum sizes");
        overlap = OverlapMatrix::identity(plus.size());
    } else if (ov.contains("dense")) {
        overlap = OverlapMatrix::from_dense(get_matrix(ov.at("dense"), "overlap.dense"));
        if (overlap.rows() == 0) overlap.entries.resize(minus.size(), plus.size());
    } else if (ov.contains("sparse")) {
        const json& sp = ov.at("sparse");
        const Index rows = get_int(sp, "rows", "overlap.sparse");
        const Index cols = get_int(sp, "cols", "overlap.sparse");
        std::vector<Eigen::Triplet<double>> trip;
        for (const auto& e : field(sp, "entries", "overlap.sparse")) {
            if (!e.is_array() || e.size() != 3)
                throw UsageError("overlap.sparse.entries", "expected [row, col, value]");
            const Index r = e[0].get<Index>(), c = e[1].get<Index>();
            if (r < 0 || r >= rows || c < 0 || c >= cols)
                throw UsageError("overlap.sparse.entries", "index out of range");
            trip.emplace_back(r, c, e[2].get<double>());
        }
        overlap.entries.resize(rows, cols);
        overlap.entries.setFromTriplets(trip.begin(), trip.end());
    } else {
        throw UsageError("overlap", "expected one of identity, dense, sparse");
    }

    if (doc.contains("meta")) {
        const json& meta = doc.at("meta");
        if (meta.contains("label_plus")) plus.label = meta.at("label_plus").get<std::string>();
        if (meta.contains("label_minus")) minus.label = meta.at("label_minus").get<std::string>();
    }
    OperatorPair pair;
    try {
        pair = make_operator_pair(std::move(plus), std::move(minus), std::move(overlap), m);
    } catch (const DomainError& e) {
        throw UsageError("", e.what());
    }
    if (doc.contains("meta")) {
        const json& meta = doc.at("meta");
        if (meta.contains("geometry")) pair.geometry = geometry_from_json(meta.at("geometry"), "meta.geometry");
        if (meta.contains("family")) pair.family = family_from_json(meta.at("family"), "meta.family");
    }
    return pair;
}

void save_pair(const OperatorPair& pair, const std::string& path)
{
    write_text_file(path, to_json(pair).dump(1) + "\n");
}

OperatorPair load_pair(const std::string& path) { return pair_from_json(read_json_file(path)); }

json to_json(const ValidationReport& r)
{
    return json{{"ok", r.ok},
                {"violations", r.violations},
                {"worst_row_deviation", r.worst_row_deviation},
                {"worst_column_deviation", r.worst_column_deviation},
                {"worst_interior_row_deviation", r.worst_interior_row_deviation},
                {"edge_rows", r.edge_rows.size()}};
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError(path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw UsageError(path, std::string("parse error: ") + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError(path, "cannot write file");
    out << text;
    if (!out) throw UsageError(path, "write failed");
}

}  // namespace bogo
