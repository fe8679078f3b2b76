#pragma once

#include "wwcva/bermudan.hpp"
#include "wwcva/config.hpp"
#include "wwcva/credit.hpp"
#include "wwcva/errors.hpp"
#include "wwcva/experiments.hpp"
#include "wwcva/exposure.hpp"
#include "wwcva/golden.hpp"
#include "wwcva/market.hpp"
#include "wwcva/oracle.hpp"
#include "wwcva/verification.hpp"
#include "wwcva/wwr.hpp"
