/* tslint:disable */
/* eslint-disable */

/**
 * Truth, naive and regularized profiles `u(x, t)` on `x_count` points.
 */
export class Profiles {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly cutoff: number;
    readonly gamma: number;
    readonly naiveError: number;
    readonly naiveOverflow: boolean;
    /**
     * NaN everywhere once the naive solve overflows.
     */
    readonly naive: Float64Array;
    readonly regularizedError: number;
    readonly regularized: Float64Array;
    readonly truth: Float64Array;
    readonly x: Float64Array;
}

/**
 * Error and fitted envelope of one metric across a log-spaced noise grid.
 */
export class SweepCurve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly envelope: Float64Array;
    readonly eps: Float64Array;
    readonly error: Float64Array;
    readonly predictedSlope: number;
    readonly slope: number;
    readonly spread: number;
}

export function reconstruct(eps: number, t: number, n_modes: number, seed: number, x_count: number): Profiles;

export function sweepCurve(metric: number, t: number, eps_count: number): SweepCurve;

/**
 * Flattened `[μ..., q(μ)..., p(μ)...]` on `count` points of `[0, mu_max]`.
 */
export function symbols(gamma: number, mu_max: number, count: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_profiles_free: (a: number, b: number) => void;
    readonly __wbg_sweepcurve_free: (a: number, b: number) => void;
    readonly profiles_cutoff: (a: number) => number;
    readonly profiles_gamma: (a: number) => number;
    readonly profiles_naive: (a: number) => [number, number];
    readonly profiles_naiveError: (a: number) => number;
    readonly profiles_naiveOverflow: (a: number) => number;
    readonly profiles_regularized: (a: number) => [number, number];
    readonly profiles_regularizedError: (a: number) => number;
    readonly profiles_truth: (a: number) => [number, number];
    readonly profiles_x: (a: number) => [number, number];
    readonly reconstruct: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly sweepCurve: (a: number, b: number, c: number) => [number, number, number];
    readonly sweepcurve_envelope: (a: number) => [number, number];
    readonly sweepcurve_eps: (a: number) => [number, number];
    readonly sweepcurve_error: (a: number) => [number, number];
    readonly sweepcurve_predictedSlope: (a: number) => number;
    readonly sweepcurve_slope: (a: number) => number;
    readonly sweepcurve_spread: (a: number) => number;
    readonly symbols: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
