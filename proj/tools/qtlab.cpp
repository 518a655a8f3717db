// qtlab: exact-arithmetic toolkit for characteristic matrices of quasitoric
// manifolds and small covers over products of simplices. JSON in, JSON out.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtlab/census.hpp"
#include "qtlab/cohomology.hpp"
#include "qtlab/isotropy.hpp"
#include "qtlab/json_io.hpp"
#include "qtlab/normal_form.hpp"
#include "qtlab/product_search.hpp"
#include "qtlab/scalar.hpp"
#include "qtlab/vector_matrix.hpp"

namespace {

using qtlab::Json;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

int default_height() {
    if (const char* env = std::getenv("QTLAB_HEIGHT")) {
        try {
            int h = std::stoi(env);
            if (h >= 1) return h;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid QTLAB_HEIGHT\n";
    }
    return 8;
}

qtlab::VectorMatrix load_matrix(const std::string& file, bool gf2) {
    std::string text;
    if (file.empty() || file == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream in(file);
        if (!in) throw std::invalid_argument("cannot open " + file);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    Json j = Json::parse(text);  // parse_error carries byte position
    qtlab::VectorMatrix a = qtlab::matrix_from_json(j);
    if (gf2 && a.mode() != qtlab::CoefficientMode::gf2)
        a = qtlab::VectorMatrix(a.shape(), qtlab::CoefficientMode::gf2, a.blocks());
    return a;
}

Json minor_record_to_json(const qtlab::MinorRecord& r) {
    Json j;
    j["multi_index"] = r.multi_index;
    Json subset = Json::array();
    for (int s : r.subset) subset.push_back(s + 1);  // 1-based factor labels
    j["subset"] = std::move(subset);
    j["value"] = qtlab::int_to_json(r.value);
    return j;
}

Json sigma_to_json(const qtlab::Permutation& sigma) {
    Json j = Json::array();
    for (int s : sigma) j.push_back(s + 1);
    return j;
}

Json rational_vector_to_json(const std::vector<qtlab::Rat>& v) {
    Json j = Json::array();
    for (const qtlab::Rat& r : v) j.push_back(qtlab::rat_to_json(r));
    return j;
}

Json relations_to_json(const std::vector<qtlab::Polynomial>& gs) {
    Json j = Json::array();
    for (const auto& g : gs) {
        Json terms = Json::array();
        for (const auto& [mono, coeff] : g) {
            Json term;
            term["monomial"] = mono;
            term["coeff"] = qtlab::int_to_json(coeff);
            terms.push_back(std::move(term));
        }
        j.push_back(std::move(terms));
    }
    return j;
}

template <class F>
Json ring_to_json(const qtlab::GradedRing<F>& r) {
    Json j;
    j["shape"] = qtlab::shape_to_json(r.shape);
    j["mode"] = r.mode == qtlab::CoefficientMode::gf2 ? "gf2" : "int";
    j["degree_scale"] = r.mode == qtlab::CoefficientMode::gf2 ? 1 : 2;
    j["relations"] = relations_to_json(r.relations);
    Json ranks = Json::array();
    Json bases = Json::array();
    for (const auto& piece : r.pieces) {
        ranks.push_back(piece.basis.size());
        Json basis = Json::array();
        for (int b : piece.basis) basis.push_back(piece.monomials[static_cast<std::size_t>(b)]);
        bases.push_back(std::move(basis));
    }
    j["ranks"] = std::move(ranks);
    j["basis"] = std::move(bases);
    return j;
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<int> parse_shape_list(const std::string& text) {
    std::vector<int> dims;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) dims.push_back(std::stoi(item));
    return dims;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact toolkit for characteristic matrices over products of simplices"};
    app.require_subcommand(1);

    std::string file;
    bool gf2 = false;
    app.add_option("--file", file, "matrix JSON file (default: stdin)");
    app.add_flag("--gf2", gf2, "treat the matrix in GF(2) (small cover) mode");

    auto* cmd_validate = app.add_subcommand("validate", "check all principal minors");
    auto* cmd_minors = app.add_subcommand("minors", "list every principal minor");
    auto* cmd_normalize = app.add_subcommand("normalize", "make all diagonal components +1");
    auto* cmd_classify = app.add_subcommand("classify", "normal-form classification");
    auto* cmd_tower = app.add_subcommand("tower", "generalized Bott tower stages");
    auto* cmd_cohomology = app.add_subcommand("cohomology", "graded ring presentation");
    auto* cmd_betti = app.add_subcommand("betti", "per-degree ranks");
    auto* cmd_restrict = app.add_subcommand("restrict", "facial submanifold ring");
    auto* cmd_nilpotent = app.add_subcommand("nilpotent-search", "degree-2 nilpotent witnesses");
    auto* cmd_product = app.add_subcommand("product-search", "cohomological product detection");
    auto* cmd_isotropy = app.add_subcommand("isotropy", "isotropy group of a coordinate pattern");
    auto* cmd_census = app.add_subcommand("census", "exhaustive bounded enumeration");

    // let --file/--gf2 appear on either side of the subcommand
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    int restrict_factor = 1;
    cmd_restrict->add_option("--factor", restrict_factor, "factor j to delete (1-based)")
        ->required();

    int nil_degree = 1;
    int height = default_height();
    cmd_nilpotent->add_option("--degree", nil_degree, "power N: search x with x^{N+1} = 0")
        ->required();
    cmd_nilpotent->add_option("--height", height, "rational height bound");
    cmd_product->add_option("--height", height, "rational height bound");

    std::string pattern_text;
    cmd_isotropy->add_option("--pattern", pattern_text, "JSON pattern, e.g. [[0],[1]]")
        ->required();

    std::string census_shape;
    int census_bound = 1;
    bool census_dedupe = false;
    int census_jobs = 1;
    std::string census_out;
    cmd_census->add_option("--shape", census_shape, "comma-separated dims, e.g. 1,1")->required();
    cmd_census->add_option("--bound", census_bound, "off-diagonal entry bound B");
    cmd_census->add_flag("--dedupe", census_dedupe, "group by conjugation orbit");
    cmd_census->add_option("--jobs", census_jobs, "worker threads");
    cmd_census->add_option("--out", census_out, "write one JSON per representative");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cmd_census->parsed()) {
            qtlab::Shape shape(parse_shape_list(census_shape));
            const auto mode = gf2 ? qtlab::CoefficientMode::gf2 : qtlab::CoefficientMode::integer;
            if (!census_out.empty()) census_dedupe = true;
            qtlab::CensusReport rep =
                qtlab::census(shape, census_bound, mode, census_dedupe, census_jobs);
            Json j;
            j["shape"] = qtlab::shape_to_json(shape);
            j["mode"] = gf2 ? "gf2" : "int";
            j["bound"] = census_bound;
            Json counts;
            counts["nodes_scanned"] = rep.nodes_scanned;
            counts["valid"] = rep.valid;
            counts["unipotent"] = rep.unipotent;
            counts["cyclic"] = rep.cyclic;
            counts["general_non_bott"] = rep.general_non_bott;
            j["counts"] = std::move(counts);
            if (census_dedupe) j["orbit_count"] = rep.representatives.size();
            if (!census_out.empty()) {
                std::filesystem::create_directories(census_out);
                for (std::size_t i = 0; i < rep.representatives.size(); ++i) {
                    char name[32];
                    std::snprintf(name, sizeof(name), "rep_%05zu.json", i);
                    std::ofstream out(std::filesystem::path(census_out) / name);
                    out << rep.representatives[i] << "\n";
                }
                j["out"] = census_out;
            }
            emit(j);
            return kExitOk;
        }

        qtlab::VectorMatrix a = load_matrix(file, gf2);

        if (cmd_validate->parsed()) {
            qtlab::ValidityResult v = qtlab::is_valid(a);
            Json j;
            j["valid"] = v.valid;
            if (!v.valid) j["certificate"] = minor_record_to_json(*v.violation);
            emit(j);
            return v.valid ? kExitOk : kExitNegative;
        }
        if (cmd_minors->parsed()) {
            Json j;
            Json minors = Json::array();
            for (const auto& r : qtlab::principal_minors(a).records)
                minors.push_back(minor_record_to_json(r));
            j["minors"] = std::move(minors);
            emit(j);
            return kExitOk;
        }
        if (cmd_normalize->parsed()) {
            qtlab::NormalizeResult r = qtlab::normalize_signs(a);
            Json j;
            j["matrix"] = qtlab::matrix_to_json(r.matrix);
            Json flips = Json::array();
            for (const auto& f : r.flips) {
                Json jf;
                jf["column"] = f.block_column + 1;
                jf["position"] = f.position + 1;
                flips.push_back(std::move(jf));
            }
            j["flips"] = std::move(flips);
            emit(j);
            return kExitOk;
        }
        if (cmd_classify->parsed()) {
            qtlab::NormalFormResult r = qtlab::classify(a);
            Json j;
            Json certs = Json::object();
            switch (r.status) {
                case qtlab::NormalFormStatus::unipotent: j["status"] = "unipotent"; break;
                case qtlab::NormalFormStatus::cyclic: j["status"] = "cyclic"; break;
                case qtlab::NormalFormStatus::general_non_bott: j["status"] = "non_bott"; break;
                case qtlab::NormalFormStatus::invalid: j["status"] = "invalid"; break;
            }
            if (r.status == qtlab::NormalFormStatus::unipotent ||
                r.status == qtlab::NormalFormStatus::cyclic) {
                j["sigma"] = sigma_to_json(r.sigma);
                j["normal_form"] = qtlab::matrix_to_json(*r.normal_form);
            }
            if (r.status == qtlab::NormalFormStatus::cyclic) {
                Json comps = Json::array();
                for (const auto& b : r.cyclic_components) comps.push_back(qtlab::int_to_json(b));
                certs["cyclic_components"] = std::move(comps);
            }
            if (r.certificate) certs["witness_minor"] = minor_record_to_json(*r.certificate);
            j["certificates"] = std::move(certs);
            emit(j);
            return r.status == qtlab::NormalFormStatus::invalid ? kExitNegative : kExitOk;
        }
        if (cmd_tower->parsed()) {
            qtlab::BottTowerDescription t = qtlab::bott_tower(a);
            Json stages = Json::array();
            for (const auto& s : t.stages) {
                Json js;
                js["fiber_dim"] = s.fiber_dim;
                Json exps = Json::array();
                for (const auto& e : s.exponents) {
                    Json je = Json::array();
                    for (const auto& v : e) je.push_back(qtlab::int_to_json(v));
                    exps.push_back(std::move(je));
                }
                js["exponents"] = std::move(exps);
                stages.push_back(std::move(js));
            }
            Json j;
            j["stages"] = std::move(stages);
            emit(j);
            return kExitOk;
        }
        if (cmd_cohomology->parsed() || cmd_betti->parsed() || cmd_restrict->parsed()) {
            const qtlab::VectorMatrix* target = &a;
            std::optional<qtlab::VectorMatrix> restricted;
            if (cmd_restrict->parsed()) {
                restricted = qtlab::delete_factor(a, restrict_factor - 1);
                target = &*restricted;
            }
            Json j;
            if (target->mode() == qtlab::CoefficientMode::gf2) {
                auto ring = qtlab::build_ring<qtlab::GF2>(*target);
                if (cmd_betti->parsed())
                    j["ranks"] = qtlab::poincare_ranks(ring);
                else
                    j = ring_to_json(ring);
            } else {
                auto ring = qtlab::build_ring<qtlab::Rat>(*target);
                if (cmd_betti->parsed())
                    j["ranks"] = qtlab::poincare_ranks(ring);
                else
                    j = ring_to_json(ring);
            }
            if (cmd_restrict->parsed()) j["matrix"] = qtlab::matrix_to_json(*restricted);
            emit(j);
            return kExitOk;
        }
        if (cmd_nilpotent->parsed()) {
            auto ring = qtlab::build_ring<qtlab::Rat>(a);
            qtlab::NilpotentSearchResult r = qtlab::search_nilpotents(ring, nil_degree, height);
            Json j;
            Json ws = Json::array();
            for (const auto& w : r.witnesses) ws.push_back(rational_vector_to_json(w));
            j["witnesses"] = std::move(ws);
            j["exhaustive"] = r.exhaustive;
            j["height"] = height;
            emit(j);
            return r.witnesses.empty() ? kExitNegative : kExitOk;
        }
        if (cmd_product->parsed()) {
            qtlab::ProductSearchOutcome r = qtlab::product_structure(a, height);
            Json j;
            switch (r.status) {
                case qtlab::ProductStatus::found: j["status"] = "found"; break;
                case qtlab::ProductStatus::none_up_to_bound: j["status"] = "none_up_to_bound"; break;
                case qtlab::ProductStatus::disproved: j["status"] = "disproved"; break;
            }
            if (r.status == qtlab::ProductStatus::found) {
                Json rows = Json::array();
                for (const auto& row : r.witness) rows.push_back(rational_vector_to_json(row));
                j["witness"] = std::move(rows);
            }
            if (r.status == qtlab::ProductStatus::none_up_to_bound) j["height"] = r.height_bound;
            if (!r.certificate.empty()) j["certificate"] = r.certificate;
            emit(j);
            return r.status == qtlab::ProductStatus::disproved ? kExitNegative : kExitOk;
        }
        if (cmd_isotropy->parsed()) {
            Json pj = Json::parse(pattern_text);
            qtlab::CoordinatePattern p;
            for (const Json& set : pj) p.nonzero.push_back(set.get<std::vector<int>>());
            qtlab::IsotropyGroup g = qtlab::isotropy_of_pattern(a, p);
            Json j;
            j["free_rank"] = g.free_rank;
            Json torsion = Json::array();
            for (const auto& t : g.torsion) torsion.push_back(qtlab::int_to_json(t));
            j["torsion"] = std::move(torsion);
            j["trivial"] = g.trivial();
            emit(j);
            return kExitOk;
        }
    } catch (const Json::parse_error& e) {
        std::cerr << "error: malformed JSON: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qtlab::InvariantViolation& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
