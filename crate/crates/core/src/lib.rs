//! Compiler from tactile chart specifications to embossable SVG.
//!
//! The pipeline is:
//!
//! 1. [`spec::parse_spec`] turns JSON text into a [`spec::TvlSpec`],
//! 2. [`spec::validate_spec`] reports semantic problems,
//! 3. [`defaults::resolve_defaults`] fills every omitted property from the
//!    tactile defaults table and assigns textures / line styles / shapes,
//! 4. [`layout::build_scene`] positions everything under tactile spacing
//!    rules, producing a [`layout::SceneGraph`],
//! 5. [`lint::lint_scene`] checks the scene against guideline rules,
//! 6. [`render::render_svg`] serializes the scene.
//!
//! [`compile::compile`] runs the whole pipeline.

pub mod braille;
pub mod compile;
pub mod data;
pub mod defaults;
pub mod diagnostic;
pub mod layout;
pub mod lint;
pub mod palette;
pub mod render;
pub mod spec;

mod geom;
mod num;

pub use compile::{compile, CompileOptions, CompileOutput, CompileRequest, CompileResponse};
pub use diagnostic::{Diagnostic, Severity};
pub use geom::{Point, Rect};
