#pragma once

#include <iosfwd>
#include <string>

#include "integra/market.hpp"

namespace integra {

/** Line-oriented market file format.
 *
 *   # comment and blank lines are ignored
 *   <kappa> <men,women> ... <men,women>      header: one count pair per community
 *   <community> <m|w> <local> : <partner> ...  one line per agent
 *
 * A bare integer count `n` in the header means `n,n`. Partner tokens are
 * `<community>.<local>` on the opposite side, most preferred first, and must
 * enumerate the entire opposite side of the society. Each agent must appear
 * exactly once; line order is free.
 */
ExtendedMarket read_market(std::istream& in);
ExtendedMarket read_market_file(const std::string& path);

void write_market(std::ostream& out, const ExtendedMarket& market);
void write_market_file(const std::string& path, const ExtendedMarket& market);

} // namespace integra
