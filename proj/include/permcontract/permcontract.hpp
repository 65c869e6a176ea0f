#pragma once

#include "permcontract/error.hpp"
#include "permcontract/gf.hpp"
#include "permcontract/parallel.hpp"
#include "permcontract/perm.hpp"
#include "permcontract/groups.hpp"
#include "permcontract/bsgs.hpp"
#include "permcontract/cgraph.hpp"
#include "permcontract/indep.hpp"
#include "permcontract/certify.hpp"
