//! Text grammar, parser and canonical printer for expressions, vector fields
//! and realization files.

mod expr_parser;
mod lexer;
mod printer;
mod realization;

pub use expr_parser::{parse_expr, parse_expr_with, MacroResolver, NoMacros, ParseOptions, DX_MARK, DY_MARK};
pub use printer::print_expr;
pub use realization::{
    field_from_expr, parse_entry_body, parse_field_text, parse_realization, parse_realization_file,
    realize, CasePredicate, CaseRhs, CellGroup, EntrySpec, LieDetCell, SeriesSpec,
};
