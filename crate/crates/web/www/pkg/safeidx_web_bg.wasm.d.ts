/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_webdemo_free: (a: number, b: number) => void;
export const webdemo_features: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const webdemo_new: () => [number, number, number];
export const webdemo_samplePage: (a: number, b: number, c: number) => [number, number];
export const webdemo_sampleStream: (a: number, b: number, c: number) => [number, number];
export const webdemo_stream: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const webdemo_trees: (a: number) => number;
export const webdemo_vote: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_start: () => void;
