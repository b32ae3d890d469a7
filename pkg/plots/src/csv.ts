import fs from 'node:fs';
import Papa from 'papaparse';
import { MissingFile, SchemaMismatch } from './errors.js';

export type Row = Record<string, string>;

export interface Table {
    path: string;
    columns: string[];
    rows: Row[];
}

/** Read a CSV file and check it carries the columns a figure kind needs. */
export function readTable(path: string, requiredColumns: string[]): Table {
    if (!fs.existsSync(path)) {
        throw new MissingFile(path);
    }
    const text = fs.readFileSync(path, 'utf-8');
    const parsed = Papa.parse<Row>(text.trim(), { header: true, skipEmptyLines: true });
    if (parsed.errors.length > 0) {
        throw new SchemaMismatch(path, `unparseable CSV (${parsed.errors[0].message})`);
    }
    const columns = parsed.meta.fields ?? [];
    for (const col of requiredColumns) {
        if (!columns.includes(col)) {
            throw new SchemaMismatch(path, `missing required column '${col}'`);
        }
    }
    if (parsed.data.length === 0) {
        throw new SchemaMismatch(path, 'no data rows');
    }
    return { path, columns, rows: parsed.data };
}

export function num(row: Row, column: string, path: string): number {
    const value = Number(row[column]);
    if (!Number.isFinite(value)) {
        throw new SchemaMismatch(path, `non-numeric value '${row[column]}' in column '${column}'`);
    }
    return value;
}
