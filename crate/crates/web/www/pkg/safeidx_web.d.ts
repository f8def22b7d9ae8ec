/* tslint:disable */
/* eslint-disable */

export class WebDemo {
    free(): void;
    [Symbol.dispose](): void;
    features(url: string, html: string): string;
    constructor();
    samplePage(seed: number, adult: boolean): string[];
    sampleStream(seed: number, pages: number): string;
    stream(lines: string, trigger: number, blacklist: string): string;
    /**
     * `min_votes` of 0 means use `fraction`.
     */
    vote(url: string, html: string, fraction: number, min_votes: number): string;
    readonly trees: number;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_webdemo_free: (a: number, b: number) => void;
    readonly webdemo_features: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly webdemo_new: () => [number, number, number];
    readonly webdemo_samplePage: (a: number, b: number, c: number) => [number, number];
    readonly webdemo_sampleStream: (a: number, b: number, c: number) => [number, number];
    readonly webdemo_stream: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly webdemo_trees: (a: number) => number;
    readonly webdemo_vote: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_drop_slice: (a: number, b: number) => void;
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
