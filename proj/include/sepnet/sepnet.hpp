#pragma once

#include "sepnet/errors.hpp"
#include "sepnet/graph_export.hpp"
#include "sepnet/learn.hpp"
#include "sepnet/manifest.hpp"
#include "sepnet/model.hpp"
#include "sepnet/net_format.hpp"
#include "sepnet/semantics.hpp"
#include "sepnet/sep.hpp"
#include "sepnet/stats.hpp"
#include "sepnet/survey.hpp"
#include "sepnet/synthetic.hpp"
#include "sepnet/tables.hpp"
#include "sepnet/validate.hpp"
