pub mod bases;
pub mod datasets;
pub mod decomposition;
pub mod designs;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod points;
