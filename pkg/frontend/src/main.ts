// CLI: render figure analogues from committed CSV artifacts.
//   node dist/main.js --figure 2a [--fixtures DIR] [--out DIR]
//   node dist/main.js --all

import * as fs from "fs";
import * as path from "path";
import { SchemaError } from "./csv";
import { RECIPES, renderRecipe } from "./figures";

interface Args {
  figures: string[];
  fixtures: string;
  out: string;
}

function parseArgs(argv: string[]): Args {
  const args: Args = {
    figures: [],
    fixtures: path.join(__dirname, "..", "fixtures"),
    out: path.join(__dirname, "..", "out"),
  };
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a === "--all") {
      args.figures = Object.keys(RECIPES);
    } else if (a === "--figure") {
      const v = argv[++i];
      if (v === undefined) throw new Error("--figure needs a value");
      args.figures.push(v);
    } else if (a === "--fixtures") {
      const v = argv[++i];
      if (v === undefined) throw new Error("--fixtures needs a value");
      args.fixtures = v;
    } else if (a === "--out") {
      const v = argv[++i];
      if (v === undefined) throw new Error("--out needs a value");
      args.out = v;
    } else if (a === "--list") {
      for (const id of Object.keys(RECIPES)) console.log(id);
      process.exit(0);
    } else {
      throw new Error(`unknown argument ${JSON.stringify(a)}`);
    }
  }
  if (args.figures.length === 0) {
    throw new Error("nothing to do: pass --figure <id> (repeatable) or --all");
  }
  return args;
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
  fs.mkdirSync(args.out, { recursive: true });
  for (const id of args.figures) {
    try {
      const svg = renderRecipe(id, args.fixtures);
      const file = path.join(args.out, `figure_${id}.svg`);
      fs.writeFileSync(file, svg);
      console.log(`wrote ${file}`);
    } catch (err) {
      if (err instanceof SchemaError) {
        console.error(`figure ${id}: ${err.message}`);
        return 1;
      }
      console.error(`figure ${id}: ${String(err instanceof Error ? err.message : err)}`);
      return 1;
    }
  }
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
