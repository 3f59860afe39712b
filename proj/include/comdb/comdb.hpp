#pragma once

#include "comdb/coql.hpp"
#include "comdb/decimal.hpp"
#include "comdb/dim_path.hpp"
#include "comdb/error.hpp"
#include "comdb/flatten.hpp"
#include "comdb/io/csv.hpp"
#include "comdb/io/data_file.hpp"
#include "comdb/io/ingest.hpp"
#include "comdb/io/schema_file.hpp"
#include "comdb/literal.hpp"
#include "comdb/model.hpp"
#include "comdb/navigate.hpp"
#include "comdb/poset.hpp"
#include "comdb/propagate.hpp"
#include "comdb/shell.hpp"
