#pragma once

#include <stdexcept>
#include <string>

namespace lfcov {

// Base class for every failure the library reports. Each concrete type
// corresponds to one named error condition of the module contracts.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// geometry
struct SingularSystem : Error { using Error::Error; };
struct ProjectiveInfinity : Error { using Error::Error; };
struct CoincidentGenerators : Error { using Error::Error; };
struct GeneratorOutsideDomain : Error { using Error::Error; };
struct DegeneratePolygon : Error { using Error::Error; };

// leader network
struct CoincidentLeaders : Error { using Error::Error; };
struct NonFiniteForce : Error { using Error::Error; };

// forces
struct InsideObstacle : Error { using Error::Error; };
struct SafetyBreached : Error { using Error::Error; };

// path planner
struct LocalMinimum : Error { using Error::Error; };
struct MaxIterations : Error { using Error::Error; };
struct DegeneratePath : Error { using Error::Error; };

// coverage
struct DegenerateMesh : Error { using Error::Error; };
struct FollowerEscapedDomain : Error { using Error::Error; };
struct TopologyBoundary : Error { using Error::Error; };
struct SingularJacobian : Error { using Error::Error; };

// cli / file formats
struct ConfigError : Error { using Error::Error; };
struct MalformedLog : Error { using Error::Error; };
struct FrameTimeOutOfRange : Error { using Error::Error; };
struct UnknownSuite : Error { using Error::Error; };

}  // namespace lfcov
