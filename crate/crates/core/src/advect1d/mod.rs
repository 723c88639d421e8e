//! Time-domain 1D linear advection: FR and finite differences on stretched
//! periodic grids, plus the FFT transfer-function harness.

pub mod fd;
pub mod fr;
pub mod grid;
pub mod slice;
pub mod time;
pub mod transfer;

pub use fd::{FdAdvection, FdScheme};
pub use fr::FrAdvection;
pub use grid::StretchedGrid1D;
pub use slice::{spatial_slice, SliceConfig, SliceProfile};
pub use time::{advance, LinearRhs};
pub use transfer::{
    numeric_ppw, wave_transfer_function, Estimator, TransferPoint, TransferTable, WaveConfig,
    WaveScheme,
};
