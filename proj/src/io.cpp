#include "symchain/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace symchain::io {

using nlohmann::json;

namespace {

StateSpace parse_space(const json& doc) {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "finite") {
        return StateSpace::finite(doc.at("n").get<int>());
    }
    if (kind == "window") {
        return StateSpace::lattice_window(doc.at("lo").get<int>(), doc.at("hi").get<int>());
    }
    throw ValidationError("InvalidInput", "unknown space kind '" + kind + "'");
}

}  // namespace

GeneratorMatrix ChainDefinition::resolve(std::optional<std::pair<int, int>> window_override) const {
    if (generator) return *generator;
    if (!model) {
        throw ValidationError("InvalidInput", "chain definition has neither a matrix nor a model");
    }
    const auto win = window_override ? window_override : window;
    if (!win) {
        throw ValidationError("InvalidInput", "a bdjump model needs a truncation window (file or --window)");
    }
    return truncate_bdjump(*model, StateSpace::lattice_window(win->first, win->second));
}

ChainDefinition parse_chain(const json& doc) {
    ChainDefinition def;
    if (doc.contains("model")) {
        const json& m = doc.at("model");
        const std::string type = m.at("type").get<std::string>();
        if (type != "bdjump") {
            throw ValidationError("InvalidInput", "unknown model type '" + type + "'");
        }
        BDJumpModel model{m.at("lambda").get<double>(), m.at("mu").get<double>(),
                          m.value("alpha", 0.0)};
        model.require_valid();
        def.model = model;
        if (doc.contains("window")) {
            def.window = {doc.at("window").at("lo").get<int>(), doc.at("window").at("hi").get<int>()};
        }
    } else {
        const StateSpace space = parse_space(doc.at("space"));
        const json& rows = doc.at("q");
        const int n = space.size();
        if (static_cast<int>(rows.size()) != n) {
            throw ValidationError("SizeMismatch", "matrix has " + std::to_string(rows.size()) +
                                                      " rows for a space of size " + std::to_string(n));
        }
        Eigen::MatrixXd q(n, n);
        for (int i = 0; i < n; ++i) {
            const json& row = rows.at(static_cast<std::size_t>(i));
            if (static_cast<int>(row.size()) != n) {
                throw ValidationError("SizeMismatch", "row " + std::to_string(i) + " has " +
                                                          std::to_string(row.size()) + " entries");
            }
            for (int j = 0; j < n; ++j) q(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
        }
        def.generator = validate_generator(q, space);
    }
    if (doc.contains("beta")) {
        if (!def.generator) {
            throw ValidationError("InvalidInput", "beta requires an explicit matrix chain definition");
        }
        SimilarityWeights beta;
        beta.space = def.generator->space;
        beta.beta = doc.at("beta").get<std::vector<double>>();
        beta.require_positive();
        def.beta = std::move(beta);
    }
    return def;
}

ChainDefinition load_chain(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw ValidationError("InvalidInput", "cannot open " + file.string());
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError("InvalidInput", "cannot parse " + file.string() + ": " + e.what());
    }
    try {
        return parse_chain(doc);
    } catch (const json::exception& e) {
        throw ValidationError("InvalidInput", "bad chain definition in " + file.string() + ": " + e.what());
    }
}

json certificate_to_json(const SymmetryCertificate& cert) {
    json doc;
    const auto rounded = static_cast<long long>(std::llround(cert.center * 2.0));
    if (rounded % 2 == 0) {
        doc["center"] = rounded / 2;  // integral center prints as an integer
    } else {
        doc["center"] = cert.center;
    }
    doc["weights"] = cert.weights;
    return doc;
}

SymmetryCertificate certificate_from_json(const json& doc, const StateSpace& space) {
    SymmetryCertificate cert;
    cert.space = space;
    cert.center = doc.at("center").get<double>();
    cert.weights = doc.at("weights").get<std::vector<double>>();
    cert.require_valid();
    return cert;
}

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::filesystem::path& file, const TimeGrid& grid, const std::vector<CsvColumn>& columns) {
    std::ofstream out(file, std::ios::binary);  // binary keeps '\n' endings everywhere
    if (!out) {
        throw ValidationError("InvalidOutput", "cannot write " + file.string());
    }
    out << "t";
    for (const auto& col : columns) {
        out << "," << col.name;
        if (static_cast<int>(col.values->size()) != grid.size()) {
            throw ValidationError("GridMismatch", "column " + col.name + " does not match the grid");
        }
    }
    out << "\n";
    for (int j = 0; j < grid.size(); ++j) {
        out << format_double(grid.t(j));
        for (const auto& col : columns) {
            out << "," << format_double((*col.values)[static_cast<std::size_t>(j)]);
        }
        out << "\n";
    }
}

void write_json(const std::filesystem::path& file, const json& doc) {
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw ValidationError("InvalidOutput", "cannot write " + file.string());
    }
    out << doc.dump(2) << "\n";
}

}  // namespace symchain::io
