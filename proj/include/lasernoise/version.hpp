#pragma once

#define LASERNOISE_VERSION_MAJOR 0
#define LASERNOISE_VERSION_MINOR 1
#define LASERNOISE_VERSION_PATCH 0

namespace lasernoise {

inline constexpr const char* version_string = "0.1.0";

}  // namespace lasernoise
