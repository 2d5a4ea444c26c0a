#ifndef DIFFTOMO_JSON_DETAIL_HPP
#define DIFFTOMO_JSON_DETAIL_HPP

#include <json.hpp>

#include "difftomo/acquisition.hpp"

// internal helpers shared by the serialization units; not installed
namespace dt::detail
{
    nlohmann::json acquisition_to_json(const AcquisitionConfig& acq);
    AcquisitionConfig acquisition_from_json(const nlohmann::json& j);
}

#endif
