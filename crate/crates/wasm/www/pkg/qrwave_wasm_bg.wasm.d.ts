/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_profiles_free: (a: number, b: number) => void;
export const __wbg_sweepcurve_free: (a: number, b: number) => void;
export const profiles_cutoff: (a: number) => number;
export const profiles_gamma: (a: number) => number;
export const profiles_naive: (a: number) => [number, number];
export const profiles_naiveError: (a: number) => number;
export const profiles_naiveOverflow: (a: number) => number;
export const profiles_regularized: (a: number) => [number, number];
export const profiles_regularizedError: (a: number) => number;
export const profiles_truth: (a: number) => [number, number];
export const profiles_x: (a: number) => [number, number];
export const reconstruct: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const sweepCurve: (a: number, b: number, c: number) => [number, number, number];
export const sweepcurve_envelope: (a: number) => [number, number];
export const sweepcurve_eps: (a: number) => [number, number];
export const sweepcurve_error: (a: number) => [number, number];
export const sweepcurve_predictedSlope: (a: number) => number;
export const sweepcurve_slope: (a: number) => number;
export const sweepcurve_spread: (a: number) => number;
export const symbols: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
