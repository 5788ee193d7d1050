#include "integra/fixture_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace integra {

namespace {

bool blank_or_comment(const std::string& line) {
    for (char ch : line) {
        if (ch == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(ch))) return false;
    }
    return true;
}

Community parse_count(const std::string& token, std::size_t community) {
    const auto where = "market file: community " + std::to_string(community);
    try {
        const auto comma = token.find(',');
        if (comma == std::string::npos) {
            const unsigned long n = std::stoul(token);
            return Community{static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n)};
        }
        const unsigned long m = std::stoul(token.substr(0, comma));
        const unsigned long w = std::stoul(token.substr(comma + 1));
        return Community{static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(w)};
    } catch (const std::exception&) {
        throw ParseError(where + ": bad count token '" + token + "'");
    }
}

// "3.1" -> (community 3, local 1)
std::pair<std::uint32_t, std::uint32_t> parse_partner(const std::string& token) {
    const auto dot = token.find('.');
    if (dot == std::string::npos)
        throw ParseError("market file: partner token '" + token + "' lacks a '.'");
    try {
        return {static_cast<std::uint32_t>(std::stoul(token.substr(0, dot))),
                static_cast<std::uint32_t>(std::stoul(token.substr(dot + 1)))};
    } catch (const std::exception&) {
        throw ParseError("market file: bad partner token '" + token + "'");
    }
}

} // namespace

ExtendedMarket read_market(std::istream& in) {
    std::string line;
    std::vector<Community> communities;
    bool have_header = false;
    std::vector<std::vector<std::uint32_t>> men_lists, women_lists;
    std::vector<char> men_seen, women_seen;
    std::vector<std::uint32_t> men_offset{0}, women_offset{0};

    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank_or_comment(line)) continue;
        std::istringstream fields(line);
        const auto at = [&] { return " (line " + std::to_string(lineno) + ")"; };
        if (!have_header) {
            std::size_t kappa = 0;
            if (!(fields >> kappa) || kappa == 0)
                throw ParseError("market file: header must start with kappa" + at());
            std::string token;
            for (std::size_t c = 0; c < kappa; ++c) {
                if (!(fields >> token))
                    throw ParseError("market file: header needs " + std::to_string(kappa) +
                                     " community counts" + at());
                communities.push_back(parse_count(token, c));
                men_offset.push_back(men_offset.back() + communities.back().men_count);
                women_offset.push_back(women_offset.back() + communities.back().women_count);
            }
            if (fields >> token) throw ParseError("market file: trailing header tokens" + at());
            men_lists.resize(men_offset.back());
            women_lists.resize(women_offset.back());
            men_seen.assign(men_offset.back(), 0);
            women_seen.assign(women_offset.back(), 0);
            have_header = true;
            continue;
        }
        std::uint32_t community = 0, local = 0;
        std::string side_token, colon;
        if (!(fields >> community >> side_token >> local >> colon) || colon != ":" ||
            (side_token != "m" && side_token != "w"))
            throw ParseError("market file: expected '<community> <m|w> <local> : ...'" + at());
        if (community >= communities.size())
            throw ParseError("market file: community out of range" + at());
        const Side side = side_token == "m" ? Side::Man : Side::Woman;
        const std::uint32_t limit = side == Side::Man ? communities[community].men_count
                                                      : communities[community].women_count;
        if (local >= limit) throw ParseError("market file: local index out of range" + at());
        const auto& offsets = side == Side::Man ? men_offset : women_offset;
        const auto& partner_offsets = side == Side::Man ? women_offset : men_offset;
        const std::uint32_t flat = offsets[community] + local;
        auto& seen = side == Side::Man ? men_seen : women_seen;
        if (seen[flat]) throw ParseError("market file: duplicate agent line" + at());
        seen[flat] = 1;
        std::vector<std::uint32_t> prefs;
        std::string token;
        while (fields >> token) {
            const auto [pc, pl] = parse_partner(token);
            if (pc >= communities.size())
                throw ParseError("market file: partner community out of range" + at());
            const std::uint32_t pcount = side == Side::Man ? communities[pc].women_count
                                                           : communities[pc].men_count;
            if (pl >= pcount) throw ParseError("market file: partner local out of range" + at());
            prefs.push_back(partner_offsets[pc] + pl);
        }
        (side == Side::Man ? men_lists : women_lists)[flat] = std::move(prefs);
    }
    if (!have_header) throw ParseError("market file: empty input");
    for (std::size_t i = 0; i < men_seen.size(); ++i)
        if (!men_seen[i]) throw ParseError("market file: missing line for a man");
    for (std::size_t i = 0; i < women_seen.size(); ++i)
        if (!women_seen[i]) throw ParseError("market file: missing line for a woman");
    try {
        return ExtendedMarket(std::move(communities),
                              PreferenceProfile(std::move(men_lists), std::move(women_lists)));
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("market file: ") + e.what());
    }
}

ExtendedMarket read_market_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("market file: cannot open '" + path + "'");
    return read_market(in);
}

void write_market(std::ostream& out, const ExtendedMarket& market) {
    out << market.kappa();
    for (const auto& c : market.communities()) out << ' ' << c.men_count << ',' << c.women_count;
    out << '\n';
    for (const Side side : {Side::Man, Side::Woman}) {
        const char side_char = side == Side::Man ? 'm' : 'w';
        for (std::uint32_t a = 0; a < market.side_count(side); ++a) {
            const AgentId id = market.agent(side, a);
            out << id.community << ' ' << side_char << ' ' << id.local << " :";
            for (const std::uint32_t p : market.preferences().list(side, a)) {
                const AgentId pid = market.agent(opposite(side), p);
                out << ' ' << pid.community << '.' << pid.local;
            }
            out << '\n';
        }
    }
}

void write_market_file(const std::string& path, const ExtendedMarket& market) {
    std::ofstream out(path);
    if (!out) throw Error("market file: cannot write '" + path + "'");
    write_market(out, market);
    if (!out) throw Error("market file: write failed for '" + path + "'");
}

} // namespace integra
