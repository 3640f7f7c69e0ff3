// Copyright 2026 The Folio Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include "folio/corpus.hpp"
#include "folio/error.hpp"
#include "folio/eval.hpp"
#include "folio/index.hpp"
#include "folio/interchange.hpp"
#include "folio/pipeline.hpp"
#include "folio/ranking.hpp"
#include "folio/references.hpp"
#include "folio/relation.hpp"
#include "folio/relations.hpp"
#include "folio/terms.hpp"
#include "folio/text.hpp"
