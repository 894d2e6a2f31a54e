#pragma once

#include "earnsignal/core/csv.hpp"
#include "earnsignal/core/date.hpp"
#include "earnsignal/core/error.hpp"
#include "earnsignal/core/random.hpp"
#include "earnsignal/core/table.hpp"
#include "earnsignal/balance.hpp"
#include "earnsignal/eval.hpp"
#include "earnsignal/experiment.hpp"
#include "earnsignal/features.hpp"
#include "earnsignal/ingest.hpp"
#include "earnsignal/models/forest.hpp"
#include "earnsignal/models/gbdt.hpp"
#include "earnsignal/models/knn.hpp"
#include "earnsignal/models/tree.hpp"
#include "earnsignal/pca.hpp"
#include "earnsignal/scaling.hpp"
#include "earnsignal/sentiment.hpp"
#include "earnsignal/synthetic.hpp"
#include "earnsignal/textprep.hpp"
