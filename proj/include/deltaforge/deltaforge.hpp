#pragma once

#include "applier.hpp"
#include "assets.hpp"
#include "checker.hpp"
#include "derivation.hpp"
#include "diagnostic.hpp"
#include "error.hpp"
#include "grammar.hpp"
#include "grammar_reader.hpp"
#include "lexer.hpp"
#include "node.hpp"
#include "parser.hpp"
#include "printer.hpp"
#include "symbols.hpp"
#include "workspace.hpp"
