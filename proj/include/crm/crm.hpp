#ifndef CRM_CRM_HPP
#define CRM_CRM_HPP

// Umbrella header.

#include "crm/classify.hpp"
#include "crm/generators.hpp"
#include "crm/io.hpp"
#include "crm/linalg.hpp"
#include "crm/mub.hpp"
#include "crm/reducibility.hpp"
#include "crm/schmidt.hpp"
#include "crm/superop.hpp"
#include "crm/symmetry.hpp"
#include "crm/tensor.hpp"
#include "crm/types.hpp"

#endif // CRM_CRM_HPP
