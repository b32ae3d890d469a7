export class MissingFile extends Error {
    constructor(path: string) {
        super(`input file not found: ${path}`);
        this.name = 'MissingFile';
    }
}

export class SchemaMismatch extends Error {
    constructor(path: string, detail: string) {
        super(`${path}: ${detail}`);
        this.name = 'SchemaMismatch';
    }
}
