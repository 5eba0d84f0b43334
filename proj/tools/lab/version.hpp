#pragma once

#include <Eigen/Core>

#define LAB_STR2(x) #x
#define LAB_STR(x) LAB_STR2(x)

namespace lab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kEigenVersion =
    LAB_STR(EIGEN_WORLD_VERSION) "." LAB_STR(EIGEN_MAJOR_VERSION) "." LAB_STR(EIGEN_MINOR_VERSION);
#if defined(__clang__)
inline constexpr const char* kCompiler = "clang " __clang_version__;
#elif defined(__GNUC__)
inline constexpr const char* kCompiler = "gcc " __VERSION__;
#else
inline constexpr const char* kCompiler = "unknown";
#endif

}  // namespace lab
