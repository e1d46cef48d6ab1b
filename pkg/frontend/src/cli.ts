#!/usr/bin/env node
/**
 * plot --in results.csv --x snr_db --y nmse_db --group estimator --out fig.svg
 *
 * Renders one curve per group value from an otfs-sbl results CSV.
 * Output format follows the extension (.svg or .png).
 */

import { renderFile } from "./plot";

interface Args {
  input: string;
  output: string;
  x: string;
  y: string;
  group: string;
  title?: string;
}

const USAGE =
  "usage: plot --in results.csv [--x snr_db] [--y nmse_db] [--group estimator] " +
  "[--title text] --out fig.svg";

export function parseArgs(argv: string[]): Args {
  const args: Partial<Args> = { x: "snr_db", y: "nmse_db", group: "estimator" };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const value = argv[i + 1];
    switch (flag) {
      case "--in":
        args.input = value;
        i++;
        break;
      case "--out":
        args.output = value;
        i++;
        break;
      case "--x":
        args.x = value;
        i++;
        break;
      case "--y":
        args.y = value;
        i++;
        break;
      case "--group":
        args.group = value;
        i++;
        break;
      case "--title":
        args.title = value;
        i++;
        break;
      case "--help":
      case "-h":
        throw new UsageRequested();
      default:
        throw new Error(`unknown flag ${flag}\n${USAGE}`);
    }
  }
  if (!args.input || !args.output) {
    throw new Error(`--in and --out are required\n${USAGE}`);
  }
  return args as Args;
}

class UsageRequested extends Error {}

async function main(): Promise<number> {
  try {
    const args = parseArgs(process.argv.slice(2));
    const summary = await renderFile(args);
    console.log(`wrote ${args.output}: ${summary.curves} curves, ${summary.points} points`);
    return 0;
  } catch (err) {
    if (err instanceof UsageRequested) {
      console.log(USAGE);
      return 0;
    }
    const name = err instanceof Error ? err.name : "Error";
    const message = err instanceof Error ? err.message : String(err);
    console.error(`error: ${name}: ${message}`);
    return 1;
  }
}

if (require.main === module) {
  main().then((code) => {
    process.exitCode = code;
  });
}
