/* tslint:disable */
/* eslint-disable */

/**
 * The parity channel `A -> B1 B2` against the relation allowing the arrows
 * chosen by `to_b1` and `to_b2`.
 */
export function parity_explorer(to_b1: boolean, to_b2: boolean): string;

/**
 * `op` is `compose` (`first` applied first) or `meet`.
 */
export function relation_op(op: string, first: string, second: string): string;

/**
 * Support of a block matrix and, if a relation is given, whether the
 * matrix satisfies it.
 */
export function sectorial_check(matrix: string, relation: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly parity_explorer: (a: number, b: number) => [number, number];
    readonly relation_op: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly sectorial_check: (a: number, b: number, c: number, d: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
