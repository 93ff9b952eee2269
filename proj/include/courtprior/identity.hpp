#ifndef COURTPRIOR_IDENTITY_HPP
#define COURTPRIOR_IDENTITY_HPP

#include <string>

#include "courtprior/cocodata.hpp"
#include "courtprior/court.hpp"

namespace courtprior {

/// Derived sub-class of a detection. Ball is assigned purely by category
/// name; humans split into court-interior players and perimeter people
/// (referees, coaches) by where they stand.
enum class Identity { Player, Perimeter, Ball };

std::string to_string(Identity id);
Identity identity_from_string(const std::string& s);

/// Case-insensitive category-name rule for the ball class.
bool is_ball_category(const std::string& category_name);

/// Ground-contact anchor: bottom-center of the detection box.
Vec2 bottom_center(const Annotation& ann);

/**
 * Ball categories are Ball regardless of position; anything else is
 * Player when its bottom-center lies in the court interior, Perimeter
 * otherwise.
 */
Identity classify(const Annotation& ann, const CourtRegion& region,
                  const std::string& category_name, double eps = 1e-6);

} // namespace courtprior

#endif
