// Command-line front end: structure validation, the checker suite, the
// associahedron diagonal tables, and the example pipelines.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "coalg/pipeline.hpp"

using namespace coalg;

namespace {

enum class Format { Text, Machine };

struct Options {
    int max_degree = 12;
    int max_length = 4;
    std::string golden;
    Format format = Format::Text;
};

void print_report(const Report& rep, Format fmt) {
    if (fmt == Format::Machine) {
        json j;
        j["check"] = rep.check;
        j["params"] = rep.params;
        j["verdict"] = rep.pass() ? "pass" : "fail";
        j["witnesses"] = json::array();
        for (const auto& w : rep.witnesses) j["witnesses"].push_back({{"location", w.location}, {"residual", w.residual}});
        j["notes"] = rep.notes;
        j["millis"] = rep.millis;
        std::cout << j.dump() << "\n";
        return;
    }
    std::cout << rep.check << ": " << (rep.pass() ? "PASS" : "FAIL") << " (" << rep.params << ") ["
              << static_cast<long>(rep.millis) << " ms]\n";
    for (const auto& w : rep.witnesses)
        std::cout << "  witness " << w.location << ": " << w.residual << "\n";
    for (const auto& n : rep.notes) std::cout << "  note: " << n << "\n";
}

int finish(const Report& rep, const Options& opt) {
    print_report(rep, opt.format);
    return rep.pass() ? 0 : 1;
}

std::string diagonal_table_text(int arity, const std::optional<PlanarTree>& cell) {
    std::ostringstream out;
    std::vector<PlanarTree> cells;
    if (cell) cells.push_back(*cell);
    else cells = all_cells(arity);
    std::sort(cells.begin(), cells.end(), [](const PlanarTree& a, const PlanarTree& b) {
        if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
        return a < b;
    });
    for (const auto& t : cells) {
        out << "cell " << t.render() << " (dim " << t.dimension() << ")\n";
        for (const auto& [p, c] : diagonal(t))
            out << "  " << (c > 0 ? "+" : "") << to_string(c) << " " << p.first.render() << " "
                << p.second.render() << "\n";
    }
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact-arithmetic toolkit for homotopy coalgebra structures"};
    app.require_subcommand(1);

    Options opt;
    std::string structure, other, mode = "psi", word_text, op_name = "ell3", cell_text;
    int arity = 2, degree = 0;

    auto add_caps = [&](CLI::App* cmd) {
        cmd->add_option("--max-degree", opt.max_degree, "total degree cap (default 12)");
        cmd->add_option("--max-length", opt.max_length, "tensor word length cap (default 4)");
        cmd->add_option("--golden", opt.golden, "golden file to write or compare");
        cmd->add_option_function<std::string>(
            "--format",
            [&](const std::string& v) {
                if (v == "text") opt.format = Format::Text;
                else if (v == "machine-readable") opt.format = Format::Machine;
                else throw CLI::ValidationError("--format must be text or machine-readable");
            },
            "output format: text | machine-readable");
    };

    auto* c_validate = app.add_subcommand("validate", "parse and validate a structure file");
    c_validate->add_option("structure", structure)->required();
    add_caps(c_validate);

    auto* c_ainf = app.add_subcommand("check-ainf", "quadratic relation checker");
    c_ainf->add_option("structure", structure)->required();
    add_caps(c_ainf);

    auto* c_cinf = app.add_subcommand("check-cinf", "shuffle condition checker");
    c_cinf->add_option("structure", structure)->required();
    add_caps(c_cinf);

    auto* c_prim = app.add_subcommand("primitives", "primitive basis of the structure space");
    c_prim->add_option("structure", structure)->required();
    add_caps(c_prim);

    auto* c_lie = app.add_subcommand("lie-basis", "graded Lyndon bracket basis");
    c_lie->add_option("structure", structure)->required();
    add_caps(c_lie);

    auto* c_ext = app.add_subcommand("extend", "extended cooperation on a tensor word");
    c_ext->add_option("structure", structure)->required();
    c_ext->add_option("--mode", mode, "psi | rho")->check(CLI::IsMember({"psi", "rho"}));
    c_ext->add_option("--arity", arity, "cooperation arity")->required();
    c_ext->add_option("--word", word_text, "dot-separated word, e.g. x.y")->required();
    add_caps(c_ext);

    auto* c_checkprim = app.add_subcommand("check-primitive", "primitive extension certification");
    c_checkprim->add_option("structure", structure)->required();
    add_caps(c_checkprim);

    auto* c_bialg = app.add_subcommand("check-bialgebra", "multiplication compatibility checker");
    c_bialg->add_option("structure", structure)->required();
    add_caps(c_bialg);

    auto* c_sym = app.add_subcommand("symmetrize", "symmetrized cooperations on the free Lie basis");
    c_sym->add_option("structure", structure)->required();
    add_caps(c_sym);

    auto* c_linf = app.add_subcommand("check-linf", "symmetrized axiom checker");
    c_linf->add_option("structure", structure)->required();
    add_caps(c_linf);

    auto* c_lbi = app.add_subcommand("check-lbialgebra", "bracket compatibility checker");
    c_lbi->add_option("structure", structure)->required();
    add_caps(c_lbi);

    auto* c_inv = app.add_subcommand("invariant", "rank invariants of the symmetrized structure");
    c_inv->add_option("structure", structure)->required();
    c_inv->add_option("--op", op_name, "invariant name (ell3)");
    c_inv->add_option("--degree", degree, "degree to evaluate")->required();
    add_caps(c_inv);

    auto* c_diag = app.add_subcommand("diagonal", "signed diagonal table of the associahedron");
    c_diag->add_option("--arity", arity, "associahedron arity n")->required();
    c_diag->add_option("--cell", cell_text, "restrict to one cell (tree text)");
    add_caps(c_diag);

    auto* c_example = app.add_subcommand("example", "run the full pipeline on a built-in structure");
    c_example->add_option("name", structure)->required();
    add_caps(c_example);

    auto* c_pipeline = app.add_subcommand("pipeline", "run the full pipeline on a structure");
    c_pipeline->add_option("structure", structure)->required();
    add_caps(c_pipeline);

    auto* c_compare = app.add_subcommand("compare", "compare two structures");
    c_compare->add_option("a", structure)->required();
    c_compare->add_option("b", other)->required();
    add_caps(c_compare);

    CLI11_PARSE(app, argc, argv);
    const Caps caps{opt.max_degree, opt.max_length};

    try {
        if (c_validate->parsed()) {
            AInfCoalgebra A = load_structure(structure);
            std::cout << "valid: " << A.name << " (" << A.space.size() - 1
                      << " generators, max arity " << A.max_arity << ")\n";
            if (opt.format == Format::Machine) std::cout << serialize_structure(A).dump() << "\n";
            return 0;
        }
        if (c_ainf->parsed()) return finish(check_ainf(load_structure(structure), opt.max_degree), opt);
        if (c_cinf->parsed()) return finish(check_cinf(load_structure(structure), opt.max_degree), opt);
        if (c_prim->parsed()) {
            AInfCoalgebra A = load_structure(structure);
            auto prim = primitives(A, opt.max_degree);
            for (const auto& p : prim) {
                std::string line;
                for (const auto& [g, c] : p) {
                    if (!line.empty()) line += " + ";
                    line += to_string(c) + "*" + A.space.gen(g).id;
                }
                int deg = 0;
                for (const auto& [g, c] : p) deg = A.space.degree(g);
                std::cout << "degree " << deg << ": " << line << "\n";
            }
            std::cout << "total " << prim.size() << " primitive basis elements through degree "
                      << opt.max_degree << "\n";
            return 0;
        }
        if (c_lie->parsed()) {
            AInfCoalgebra A = load_structure(structure);
            auto basis = lie_basis(A.space, opt.max_degree, opt.max_length);
            std::map<int, int> dims;
            for (const auto& b : basis) {
                dims[b.degree] += 1;
                std::cout << "degree " << b.degree << " weight " << b.weight << ": " << b.name
                          << "\n";
            }
            for (const auto& [d, n] : dims) std::cout << "dim_" << d << " = " << n << "\n";
            return 0;
        }
        if (c_ext->parsed()) {
            AInfCoalgebra A = load_structure(structure);
            TensorExt ext(A);
            Word w;
            std::stringstream ss(word_text);
            std::string part;
            while (std::getline(ss, part, '.')) {
                const int idx = A.space.index_of(part);
                if (idx < 0 || idx == A.space.counit()) {
                    std::cerr << "error: unknown generator '" << part << "' in --word\n";
                    return 2;
                }
                w.push_back(idx);
            }
            const TupleElement& val = (mode == "psi") ? ext.psi(arity, w) : ext.rho(arity, w);
            std::cout << mode << "_" << arity << "(" << show_alg_word(A.space, w)
                      << ") = " << show_tuple_element(A.space, val) << "\n";
            return 0;
        }
        if (c_checkprim->parsed()) {
            AInfCoalgebra A = load_structure(structure);
            TensorExt ext(A);
            return finish(check_primitive_ainf(ext, opt.max_degree, opt.max_length), opt);
        }
        if (c_bialg->parsed()) {
            AInfCoalgebra A = load_structure(structure);
            TensorExt ext(A);
            return finish(check_bialgebra(ext, {2, 3, 4}, opt.max_degree, opt.max_length), opt);
        }
        if (c_sym->parsed()) {
            AInfCoalgebra A = load_structure(structure);
            TensorExt ext(A);
            LInfStructure L = free_lie_linf_structure(A, ext, opt.max_degree, opt.max_length);
            for (const auto& b : L.basis) {
                for (int r = 2; r <= A.max_arity; ++r) {
                    TupleElement v = L.ell(r, b.expansion);
                    if (v.is_zero()) continue;
                    std::cout << "ell^" << r << "(" << b.name
                              << ") = " << show_tuple_element(A.space, v) << "\n";
                }
            }
            return 0;
        }
        if (c_linf->parsed()) {
            AInfCoalgebra A = load_structure(structure);
            TensorExt ext(A);
            LInfStructure L = free_lie_linf_structure(A, ext, opt.max_degree, opt.max_length);
            return finish(check_linf(L, opt.max_degree, 4), opt);
        }
        if (c_lbi->parsed()) {
            AInfCoalgebra A = load_structure(structure);
            TensorExt ext(A);
            LInfStructure L = free_lie_linf_structure(A, ext, opt.max_degree, opt.max_length);
            return finish(check_linf_bialgebra(L, opt.max_degree, 4), opt);
        }
        if (c_inv->parsed()) {
            if (op_name != "ell3") {
                std::cerr << "error: unknown invariant '" << op_name << "'\n";
                return 2;
            }
            AInfCoalgebra A = load_structure(structure);
            TensorExt ext(A);
            LInfStructure L = free_lie_linf_structure(A, ext, opt.max_degree, opt.max_length);
            std::cout << "ell3 rank in degree " << degree << ": " << ell3_rank_invariant(L, degree)
                      << "\n";
            return 0;
        }
        if (c_diag->parsed()) {
            std::optional<PlanarTree> cell;
            if (!cell_text.empty()) {
                cell = PlanarTree::parse(cell_text);
                if (cell->arity() != arity) {
                    std::cerr << "error: --cell arity does not match --arity\n";
                    return 2;
                }
            }
            const std::string table = diagonal_table_text(arity, cell);
            if (!opt.golden.empty()) {
                std::ifstream in(opt.golden);
                if (in) {
                    std::ostringstream existing;
                    existing << in.rdbuf();
                    if (existing.str() != table) {
                        std::cerr << "golden mismatch against " << opt.golden << "\n";
                        return 1;
                    }
                    std::cout << "golden match: " << opt.golden << "\n";
                    return 0;
                }
                std::ofstream out(opt.golden);
                if (!out) {
                    std::cerr << "error: cannot write golden file " << opt.golden << "\n";
                    return 2;
                }
                out << table;
                std::cout << "golden written: " << opt.golden << "\n";
                return 0;
            }
            std::cout << table;
            return 0;
        }
        if (c_example->parsed() || c_pipeline->parsed()) {
            AInfCoalgebra A = load_structure(structure);
            PipelineResult res = run_pipeline(A, caps);
            for (const auto& rep : res.reports) print_report(rep, opt.format);
            std::cout << "free Lie dimensions:";
            for (const auto& [d, n] : res.lie_dimensions) std::cout << " " << d << ":" << n;
            std::cout << "\nell3 rank table:";
            for (const auto& [d, r] : res.ell3_ranks)
                if (r != 0) std::cout << " " << d << ":" << r;
            std::cout << "\npipeline: " << (res.pass() ? "ALL PASS" : "FAILURES PRESENT") << "\n";
            return res.pass() ? 0 : 1;
        }
        if (c_compare->parsed()) {
            AInfCoalgebra A = load_structure(structure);
            AInfCoalgebra B = load_structure(other);
            CompareResult res = compare_structures(A, B, caps);
            for (const auto& line : res.lines) std::cout << line << "\n";
            std::cout << "graded Lie dimensions " << (res.same_lie_dimensions ? "agree" : "differ")
                      << "\n";
            std::cout << (res.distinguished_by_ell3
                              ? "distinguished by ell3: the structures are not isomorphic"
                              : "not distinguished by ell3 at these caps")
                      << "\n";
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
