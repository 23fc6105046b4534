//! Kernel, surface language and finite semantic oracle for dependent type
//! theory with the natural modality `♮`.

pub mod driver;
pub mod finmodel;
pub mod gen;
pub mod kernel;
pub mod props;
pub mod surface;
pub mod syntax;
