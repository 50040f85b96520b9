// presets.hpp
// Built-in interferometer configurations with golden presence tables.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "whichpath/scenario.hpp"

namespace whichpath {

struct GoldenValue {
    std::string site;
    Complex value;
    std::string source;  // provenance tag: "published" or "derived"
};

struct PresetEntry {
    std::string name;
    std::string description;
    Scenario scenario;
    std::vector<GoldenValue> goldenTable;
};

class UnknownPresetError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

struct PresetSource {
    std::string_view name;
    std::string_view description;
    std::string_view provenance;
    std::string_view text;
};

// The nested interferometer: BS1 sends 1/3 of the intensity to C and 2/3 into
// the inner interferometer (E), which is balanced and closes destructively
// toward F. BS4 recombines C and F toward the detector with ratio 1/3.
inline const std::vector<PresetSource>& presetSources() {
    static const std::vector<PresetSource> sources = {
        {"fig1a", "Single path: the particle certainly passes, reference signal alpha = 1.", "published", R"(
scenario fig1a
path IN { probe; mirror; marker M_IN }
detect IN
expect IN = 1
)"},
        {"fig1b", "One beam splitter; postselection on OUT leaves no presence in the reflected port REF.",
         "published", R"(
scenario fig1b
path IN { probe }
path OUT { probe }
path REF { probe }
split BS IN -> OUT, REF ratio 1/2
detect OUT
cut OUT, REF
expect IN = 1
expect OUT = 1
expect REF = 0
)"},
        {"fig2a", "Balanced Mach-Zehnder interferometer tuned to constructive interference.", "published", R"(
scenario fig2a
path IN { probe }
path A { mirror; probe; marker MA }
path B { mirror; probe; marker MB }
path OUT { probe }
path DARK {}
split BS1 IN -> A, B ratio 1/2
merge BS2 A, B -> OUT, DARK ratio 1/2
detect OUT
cut A, B
cut OUT, DARK
expect IN = 1
expect A = 1/2
expect B = 1/2
expect OUT = 1
)"},
        {"fig2a_pi",
         "Balanced interferometer with a pi device in arm B, B probe upstream of the device: the input "
         "probe sees no signal and B reports -1/2.",
         "published", R"(
scenario fig2a_pi
path IN { probe }
path A { mirror; probe; marker MA }
path B { probe; device pi; mirror; marker MB }
path OUT { probe }
path DARK {}
split BS1 IN -> A, B ratio 1/2
merge BS2 A, B -> OUT, DARK ratio 1/2
detect OUT
cut A, B
expect IN = 0
expect A = 1/2
expect B = -1/2
expect OUT = 1
)"},
        {"fig2b", "Interferometer with 90% reflecting beam splitters, constructive tuning.", "published", R"(
scenario fig2b
path IN { probe }
path A { mirror; probe; marker MA }
path B { mirror; probe; marker MB }
path OUT { probe }
path DARK {}
split BS1 IN -> A, B ratio 9/10
merge BS2 A, B -> OUT, DARK ratio 9/10
detect OUT
cut A, B
expect IN = 1
expect A = 9/10
expect B = 1/10
expect OUT = 1
)"},
        {"fig2c", "90% interferometer tuned to minimum intensity at the detector by a pi phase in arm B.",
         "published", R"(
scenario fig2c
path IN { probe }
path A { mirror; probe; marker MA }
path B { mirror; phase pi; probe; marker MB }
path OUT { probe }
path DARK {}
split BS1 IN -> A, B ratio 9/10
merge BS2 A, B -> OUT, DARK ratio 9/10
detect OUT
cut A, B
expect IN = 1
expect A = 9/8
expect B = -1/8
expect OUT = 1
)"},
        {"fig3a", "Nested interferometer: presence in C, A and B but not in E or F.", "published", R"(
scenario fig3a
path IN { probe }
path C { mirror; probe; marker MC }
path E { probe; marker ME }
path A { mirror; probe; marker MA }
path B { mirror; probe; marker MB }
path X {}
path F { probe }
path OUT { probe }
path DARK {}
split BS1 IN -> C, E ratio 1/3
split BS2 E -> A, B ratio 1/2
merge BS3 A, B -> X, F ratio 1/2
merge BS4 C, F -> OUT, DARK ratio 1/3
detect OUT
cut C, E
cut C, A, B
cut C, X, F
cut X, OUT, DARK
expect IN = 1
expect C = 1
expect E = 0
expect F = 0
expect A = 1
expect B = -1
expect OUT = 1
)"},
        {"fig3b",
         "Nested interferometer with the pi device in arm B, upstream of the B probe. A device in E would "
         "leave every alpha equal to fig3a because E carries no first-order signal.",
         "published", R"(
scenario fig3b
path IN { probe }
path C { mirror; probe; marker MC }
path E { probe; marker ME }
path A { mirror; probe; marker MA }
path B { mirror; device pi; probe; marker MB }
path X {}
path F { probe }
path OUT { probe }
path DARK {}
split BS1 IN -> C, E ratio 1/3
split BS2 E -> A, B ratio 1/2
merge BS3 A, B -> X, F ratio 1/2
merge BS4 C, F -> OUT, DARK ratio 1/3
detect OUT
cut C, E
cut C, A, B
cut C, X, F
cut X, OUT, DARK
expect IN = 3
expect C = 1
expect E = 2
expect F = 0
expect A = 1
expect B = -1
expect OUT = 1
)"},
        {"fig3a_block_e",
         "Nested interferometer with E blocked: E has no first-order trace, yet blocking it removes the "
         "signals in A and B.",
         "derived", R"(
scenario fig3a_block_e
path IN {}
path C { mirror; probe; marker MC }
path E { block }
path A { mirror; probe }
path B { mirror; probe }
path X {}
path F {}
path OUT {}
path DARK {}
split BS1 IN -> C, E ratio 1/3
split BS2 E -> A, B ratio 1/2
merge BS3 A, B -> X, F ratio 1/2
merge BS4 C, F -> OUT, DARK ratio 1/3
detect OUT
expect C = 1
expect A = 0
expect B = 0
)"},
        {"fig2a_two_probe",
         "Balanced interferometer probed in A and B at once, each probe writing to its own ancilla.",
         "published", R"(
scenario fig2a_two_probe
ancillas 2
path IN {}
path A { mirror; probe }
path B { mirror; probe }
path OUT {}
path DARK {}
split BS1 IN -> A, B ratio 1/2
merge BS2 A, B -> OUT, DARK ratio 1/2
detect OUT
expect A = 1/2
expect B = 1/2
)"},
    };
    return sources;
}

}  // namespace detail

inline std::vector<std::string> listPresets() {
    std::vector<std::string> names;
    for (const auto& s : detail::presetSources()) names.emplace_back(s.name);
    return names;
}

inline bool isPreset(std::string_view name) {
    for (const auto& s : detail::presetSources())
        if (s.name == name) return true;
    return false;
}

inline PresetEntry buildPreset(std::string_view name) {
    for (const auto& s : detail::presetSources()) {
        if (s.name != name) continue;
        ParseResult parsed = parse(s.text);
        if (!parsed.ok()) throw std::logic_error("built-in preset does not parse:\n" + parsed.errorText(s.name));
        PresetEntry entry{std::string(s.name), std::string(s.description), std::move(*parsed.scenario), {}};
        for (const auto& [site, v] : entry.scenario.expected)
            entry.goldenTable.push_back({site, v, std::string(s.provenance)});
        return entry;
    }
    throw UnknownPresetError("unknown preset '" + std::string(name) + "'");
}

}  // namespace whichpath
