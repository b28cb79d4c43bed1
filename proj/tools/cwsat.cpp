#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "cwsat/af.hpp"
#include "cwsat/encoder.hpp"
#include "cwsat/formula.hpp"
#include "cwsat/hardness.hpp"
#include "cwsat/kexpr.hpp"
#include "cwsat/solver.hpp"
#include "cwsat/witness.hpp"

using namespace cwsat;

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot open " + path + " for writing");
    out << text;
}

Af load_af(const std::string& path) {
    std::string text = read_input(path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".tgf") return parse_tgf(text);
    return parse_apx(text);
}

KExpr load_expr_or_trivial(const Af& af, const std::string& path) {
    if (path.empty()) {
        std::cerr << "warning: no k-expression supplied, falling back to the trivial width-"
                  << af.arg_count() << " expression\n";
        return trivial_expression(af);
    }
    std::string text = read_input(path);
    // tolerate a witness-style header line
    std::string body;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.empty() || line[0] == '#') continue;
        else body += line + "\n";
    return parse_kexpr(body);
}

int run(int argc, char** argv) {
    CLI::App app{"decomposition-guided (Q)SAT compiler for abstract argumentation"};
    app.require_subcommand(1);

    std::string af_path, expr_path, out_path, prov_path, sem_tag = "stb", arg_name, mode = "cred";
    std::string cnf_path, external, phi_path;
    bool dnf_matrix = false, enumerate = false;
    int kmax = 2, oracle_limit = 20;
    long budget = 200000;

    auto* cval = app.add_subcommand("validate", "check a k-expression against a framework");
    cval->add_option("af", af_path)->required();
    cval->add_option("expr", expr_path)->required();

    auto* cenc = app.add_subcommand("encode", "emit the DDG encoding of a semantics");
    cenc->add_option("--sem", sem_tag)->required();
    cenc->add_option("af", af_path)->required();
    cenc->add_option("expr", expr_path);
    cenc->add_option("-o,--output", out_path);
    cenc->add_option("--provenance", prov_path);
    cenc->add_flag("--dnf-matrix", dnf_matrix, "convert the matrix to pure DNF");

    auto* csolve = app.add_subcommand("solve", "solve a DIMACS CNF file");
    csolve->add_option("cnf", cnf_path)->required();
    csolve->add_option("--external", external, "external solver command");

    auto* ccount = app.add_subcommand("count", "count extensions via the encoding");
    ccount->add_option("--sem", sem_tag)->required();
    ccount->add_option("af", af_path)->required();
    ccount->add_option("expr", expr_path);

    auto* cacc = app.add_subcommand("accept", "decide acceptance via the encoding");
    cacc->add_option("--sem", sem_tag)->required();
    cacc->add_option("--arg", arg_name)->required();
    cacc->add_option("--mode", mode)->check(CLI::IsMember({"cred", "skept"}));
    cacc->add_option("af", af_path)->required();
    cacc->add_option("expr", expr_path);

    auto* corc = app.add_subcommand("oracle", "brute-force reference results");
    corc->add_option("--sem", sem_tag)->required();
    corc->add_option("af", af_path)->required();
    corc->add_flag("--enumerate", enumerate);
    corc->add_option("--limit", oracle_limit);

    auto* cwit = app.add_subcommand("witness", "build and verify the clique-width witness");
    cwit->add_option("--sem", sem_tag)->required();
    cwit->add_option("af", af_path)->required();
    cwit->add_option("expr", expr_path);
    cwit->add_option("-o,--output", out_path);

    auto* cgen = app.add_subcommand("gen-hard", "3CNF to AF instance generator");
    cgen->add_option("phi", phi_path)->required();
    cgen->add_option("-o,--output", out_path);

    auto* cfind = app.add_subcommand("find-kexpr", "search for a small k-expression");
    cfind->add_option("af", af_path)->required();
    cfind->add_option("--kmax", kmax)->required();
    cfind->add_option("--budget", budget);
    cfind->add_option("-o,--output", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (cval->parsed()) {
        Af af = load_af(af_path);
        KExpr x = load_expr_or_trivial(af, expr_path);
        ValidationReport rep = validate(x, af);
        if (rep.ok()) {
            std::cout << "VALID width=" << x.width << "\n";
            return 0;
        }
        std::cout << "INVALID\n";
        std::cerr << rep.to_string();
        return 3;
    }
    if (cenc->parsed()) {
        Af af = load_af(af_path);
        KExpr x = load_expr_or_trivial(af, expr_path);
        Semantics sem = semantics_from_tag(sem_tag);
        Encoding enc = encode(af, x, sem);
        if (!enc.second_level) {
            if (dnf_matrix) throw input_error("--dnf-matrix applies to second-level semantics");
            write_output(out_path, write_dimacs(enc.cnf, &enc.vars, &af));
        } else if (dnf_matrix) {
            DnfMatrixResult res = convert_matrix(enc, x);
            write_output(out_path, write_qbf(res.qbf, &res.vars, &af));
            if (auto qd = write_qdimacs_complement(res.qbf); qd && !out_path.empty())
                write_output(out_path + ".qdimacs", *qd);
        } else {
            write_output(out_path, write_qbf(enc.to_qbf2(), &enc.vars, &af));
        }
        if (!prov_path.empty()) write_output(prov_path, provenance_text(enc));
        return 0;
    }
    if (csolve->parsed()) {
        if (external.empty())
            if (const char* env = std::getenv("CWSAT_EXTERNAL_SOLVER")) external = env;
        SolveResult r;
        if (!external.empty()) {
            r = external_solve(cnf_path, external);
        } else {
            Cnf cnf = parse_dimacs(read_input(cnf_path));
            r = sat(cnf);
        }
        std::cout << (r.sat ? "SAT" : "UNSAT") << "\n";
        if (r.sat) {
            std::cout << "v";
            for (size_t v = 1; v < r.model->value.size(); v++)
                std::cout << " " << (r.model->value[v] ? static_cast<int>(v) : -static_cast<int>(v));
            std::cout << " 0\n";
        }
        return 0;
    }
    if (ccount->parsed()) {
        Af af = load_af(af_path);
        KExpr x = load_expr_or_trivial(af, expr_path);
        std::cout << count(af, x, semantics_from_tag(sem_tag)) << "\n";
        return 0;
    }
    if (cacc->parsed()) {
        Af af = load_af(af_path);
        KExpr x = load_expr_or_trivial(af, expr_path);
        int arg = af.arg_index(arg_name);
        if (arg < 0) throw input_error("unknown argument: " + arg_name);
        bool yes = decide(af, x, semantics_from_tag(sem_tag), arg,
                          mode == "cred" ? AcceptMode::Credulous : AcceptMode::Skeptical);
        std::cout << (yes ? "YES" : "NO") << "\n";
        return yes ? 0 : 1;
    }
    if (corc->parsed()) {
        Af af = load_af(af_path);
        Semantics sem = semantics_from_tag(sem_tag);
        auto exts = oracle_enumerate(af, sem, oracle_limit);
        if (enumerate) {
            for (Extension e : exts) {
                bool first = true;
                for (int a = 0; a < af.arg_count(); a++)
                    if (e >> a & 1) {
                        std::cout << (first ? "" : " ") << af.args[a];
                        first = false;
                    }
                if (first) std::cout << "-";
                std::cout << "\n";
            }
        } else {
            std::cout << exts.size() << "\n";
        }
        return 0;
    }
    if (cwit->parsed()) {
        Af af = load_af(af_path);
        KExpr x = load_expr_or_trivial(af, expr_path);
        Encoding enc = encode(af, x, semantics_from_tag(sem_tag));
        Witness w = build_witness(enc, x);
        WitnessReport rep = verify_witness(w, enc);
        if (!out_path.empty()) write_output(out_path, write_witness(w));
        std::cout << "colors_used=" << w.colors_used << " budget=" << w.budget
                  << (rep.ok() ? " ok" : " FAIL") << "\n";
        if (!rep.ok()) {
            std::cerr << rep.to_string();
            return 4;
        }
        return 0;
    }
    if (cgen->parsed()) {
        ThreeCnf phi = threecnf_from_dimacs(read_input(phi_path));
        HardnessInstance inst = threesat_to_af(phi);
        write_output(out_path, write_apx(inst.af));
        std::cerr << "distinguished argument: " << inst.af.args[inst.sat_arg] << "\n";
        return 0;
    }
    if (cfind->parsed()) {
        Af af = load_af(af_path);
        SearchResult r = search_expression(af, kmax, budget);
        if (r.status == SearchStatus::Found) {
            std::string text = serialize_kexpr(*r.expr) + "\n";
            write_output(out_path, text);
            if (!out_path.empty() && out_path != "-")
                std::cout << "FOUND width=" << r.expr->width << "\n";
            return 0;
        }
        if (r.status == SearchStatus::NoneWithinK) {
            std::cout << "NONE\n";
            return 1;
        }
        std::cout << "BUDGET\n";
        return 4;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind) {
            case ErrorKind::Input: return 3;
            case ErrorKind::Resource: return 4;
            case ErrorKind::Internal: return 4;
        }
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
