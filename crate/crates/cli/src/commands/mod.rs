pub mod analyze;
pub mod certify;
pub mod oracle;
pub mod predict;
pub mod simulate;
