//! FFT-based cyclic convolution and the first- and second-order scattering transforms.

mod conv;
mod fft;
mod first_order;
mod io;
mod oracle;
mod paths;
mod second_order;
mod symmetry;
mod transform;

pub use conv::{cyclic_convolve, CyclicArray};
pub use fft::{fft, AxisPlan, NdPlan};
pub use first_order::{s1, u1, FirstOrderPlan, S1Matrix, ScatterTensor1};
pub use io::{read_path_csv, write_path_csv, PATH_CSV_HEADER};
pub use oracle::direct_cyclic_convolve;
pub use paths::{FeaturePath, S1Path};
pub use second_order::{s2, u2, PathSink, S2Vector, ScatterTensor2, SecondOrderLayout, SecondOrderPlan};
pub use symmetry::{symmetry, Symmetry};
pub use transform::{TransformMetadata, TransformOutput, Transformer, BASIS_TOL};
