#ifndef CWSAT_AF_HPP
#define CWSAT_AF_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cwsat {

// Error categories, mapped to process exit codes by the CLI.
enum class ErrorKind { Input, Resource, Internal };

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
    ErrorKind kind;
};

inline Error input_error(const std::string& msg) { return Error(ErrorKind::Input, msg); }
inline Error resource_error(const std::string& msg) { return Error(ErrorKind::Resource, msg); }
inline Error internal_error(const std::string& msg) { return Error(ErrorKind::Internal, msg); }

enum class Semantics { ConflictFree, Admissible, Complete, Stable, Preferred, SemiStable, Stage };

const char* semantics_name(Semantics s);
// Accepts the CLI tags cf|adm|com|stb|prf|sst|stg.
Semantics semantics_from_tag(std::string_view tag);
bool semantics_second_level(Semantics s);

// Argument subset as a bitmask over argument indices. The brute-force
// oracle is capped well below 64 arguments, so a word is enough.
using Extension = std::uint64_t;

struct Af {
    std::vector<std::string> args;           // declaration order
    std::map<std::string, int> index;
    std::vector<std::pair<int, int>> attacks; // unique (attacker, target)

    int arg_count() const { return static_cast<int>(args.size()); }
    int add_arg(const std::string& name);
    int arg_index(const std::string& name) const; // -1 if unknown
    void add_attack(int from, int to);
    bool has_attack(int from, int to) const;
    bool has_self_attack() const;
    // Indices of attackers of `a`, and of targets attacked by `a`.
    std::vector<int> attackers_of(int a) const;
    std::vector<int> targets_of(int a) const;
};

Af parse_apx(std::string_view text);
Af parse_tgf(std::string_view text);
std::string write_apx(const Af& af);

// def_F(S): arguments whose every attacker is counter-attacked from `s`.
Extension defended_set(const Af& af, Extension s);
// S+ = S plus everything attacked by S.
Extension range_of(const Af& af, Extension s);

bool oracle_check(const Af& af, Extension s, Semantics sigma);
std::vector<Extension> oracle_enumerate(const Af& af, Semantics sigma, int limit = 20);

enum class AcceptMode { Credulous, Skeptical };
bool oracle_accept(const Af& af, Semantics sigma, int arg, AcceptMode mode, int limit = 20);

} // namespace cwsat

#endif
