import { parseArgs } from 'node:util';
import { MissingFile, SchemaMismatch } from './errors.js';
import { FigureKind, render } from './figures.js';

const KINDS: FigureKind[] = ['trace_overlay', 'deviation_fan', 'cost_vs_rho', 'nominal_traj'];

const USAGE = `usage: node dist/cli.js --in <csv> --kind <${KINDS.join('|')}> --out <image.svg>`;

export function main(argv: string[]): number {
    let values;
    try {
        ({ values } = parseArgs({
            args: argv,
            options: {
                in: { type: 'string' },
                kind: { type: 'string' },
                out: { type: 'string' },
            },
        }));
    } catch (e) {
        console.error(`${(e as Error).message}\n${USAGE}`);
        return 2;
    }
    const { in: input, kind, out } = values;
    if (!input || !kind || !out) {
        console.error(USAGE);
        return 2;
    }
    if (!KINDS.includes(kind as FigureKind)) {
        console.error(`unknown figure kind '${kind}'\n${USAGE}`);
        return 2;
    }
    try {
        render({ inputCsv: input, kind: kind as FigureKind, outputImage: out });
    } catch (e) {
        if (e instanceof MissingFile) {
            console.error(e.message);
            return 3;
        }
        if (e instanceof SchemaMismatch) {
            console.error(e.message);
            return 4;
        }
        throw e;
    }
    return 0;
}

if (process.argv[1] && process.argv[1].endsWith('cli.js')) {
    process.exit(main(process.argv.slice(2)));
}
